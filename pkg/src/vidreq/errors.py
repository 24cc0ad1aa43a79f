"""Exception types shared across the pipeline.

Every error is a ``VidreqError``. ``BackendUnavailable`` marks external
backend failures (CLI exit code 2); everything else is treated as input or
validation failure (exit code 1).
"""


class VidreqError(Exception):
    """Base class for all pipeline errors."""


# corpus manifest / core model
class MalformedManifest(VidreqError):
    pass


class DuplicateId(VidreqError):
    pass


class MissingField(VidreqError):
    pass


# frame sampling
class EmptyFrame(VidreqError):
    pass


class LengthMismatch(VidreqError):
    pass


class MissingFrames(VidreqError):
    pass


# text extraction
class MediaUnreadable(VidreqError):
    pass


class RecordMismatch(VidreqError):
    pass


# relevance
class InsufficientClassData(VidreqError):
    pass


class EmptyTestSet(VidreqError):
    pass


# annotation
class KeySetMismatch(VidreqError):
    pass


class UnknownSession(VidreqError):
    pass


class UnassignedRecord(VidreqError):
    pass


class ForeignAnnotator(VidreqError):
    pass


class UnresolvedDisagreement(VidreqError):
    def __init__(self, record_ids):
        self.record_ids = list(record_ids)
        super().__init__(f"unresolved disagreements: {self.record_ids}")


# themes
class EmptyCorpus(VidreqError):
    pass


class KExceedsN(VidreqError):
    pass


class SingleCluster(VidreqError):
    pass


class TooFewDocuments(VidreqError):
    pass


class EmptyCluster(VidreqError):
    pass


# stats
class DanglingBundle(VidreqError):
    pass


# external backends (CLI exit code 2)
class BackendUnavailable(VidreqError):
    pass
