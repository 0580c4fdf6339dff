"""Exception types shared across the package.

Every error raised by vsim derives from VsimError so callers can catch one
base class at API boundaries. Parsing and validation errors carry enough
message context to be actionable without a debugger.
"""


class VsimError(Exception):
    """Base class for all vsim errors."""


# --- model / vector math ---------------------------------------------------

class ModelFormatError(VsimError):
    """A word-embedding model file violates its declared format."""


class MalformedHeader(ModelFormatError):
    """Header line is not '<vocab_size> <dim>' with positive integers."""


class TruncatedFile(ModelFormatError):
    """File ends before the amount of data its header promises."""


class DuplicateWord(ModelFormatError):
    """The same token appears twice in a model file."""


class ZeroVector(VsimError):
    """A vector with L2 norm below 1e-12 where a direction is required."""


class DimensionMismatch(VsimError):
    """Vector length differs from the dimensionality in force."""


class UnknownWord(VsimError):
    """A required token is not in the model vocabulary."""

    def __init__(self, word: str):
        super().__init__(f"unknown word: {word!r}")
        self.word = word


# --- text vectorization ----------------------------------------------------

class UnvectorizableText(VsimError):
    """Text cannot be turned into a document vector."""


class NoTokens(UnvectorizableText):
    """Tokenization produced an empty token list."""


class AllOutOfVocabulary(UnvectorizableText):
    """No token (even after lowercase fallback) is in the vocabulary."""


# --- similarity index ------------------------------------------------------

class InvalidDimension(VsimError):
    """Index dimensionality must be a positive integer."""


class NotNormalized(VsimError):
    """Vector norm is not within 1e-4 of 1.0."""


class EmptyId(VsimError):
    """Document id must be a non-empty string of at most 256 UTF-8 bytes."""


class SnapshotError(VsimError):
    """A snapshot file cannot be read back."""


class BadMagic(SnapshotError):
    """File does not start with the VSIX magic bytes."""


class UnsupportedVersion(SnapshotError):
    """Snapshot version byte is not one this build understands."""


class CrcMismatch(SnapshotError):
    """Snapshot checksum does not match its payload."""


class IoError(VsimError):
    """Underlying filesystem operation failed."""


# --- service workflow ------------------------------------------------------

class DuplicateId(VsimError):
    """An item with this id has already been submitted."""


class NotFound(VsimError):
    """No item or suggestion with the requested id."""


class AlreadyDecided(VsimError):
    """The suggestion left the pending state earlier; decisions are final."""


class IllegalTransition(VsimError):
    """Items may only move from pending to fact_checked."""
