"""Requirements-relevant feedback mining from product videos.

Pipeline stages: corpus ingest and filtering, saliency-driven candidate
frame sampling, audio/visual text extraction, relevance classification,
theme clustering, content statistics, and a human annotation service.
"""

__version__ = "0.1.0"
