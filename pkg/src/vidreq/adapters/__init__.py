"""Deterministic stub ASR/OCR adapters implementing the executable
contracts, for tests and fixture pipelines."""
