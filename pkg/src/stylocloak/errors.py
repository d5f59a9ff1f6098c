"""Exception hierarchy.

Every exception carries a short machine-parsable ``code`` used by the CLI
error format ``error: <code>: <message>``.
"""

from __future__ import annotations


class StylocloakError(Exception):
    """Base class for all library errors."""

    code = "error"


class ConfigError(StylocloakError):
    """Bad configuration or usage; maps to CLI exit code 2."""

    code = "usage"


class MissingFileError(ConfigError):
    code = "missing-file"


class LexiconParseError(ConfigError):
    code = "lexicon-parse"

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


# --- steganographic codec ---------------------------------------------------

class DirtyCarrierError(StylocloakError):
    code = "dirty-carrier"


class PayloadTooLargeError(StylocloakError):
    code = "payload-too-large"


class CapacityError(StylocloakError):
    code = "capacity"

    def __init__(self, needed, available):
        super().__init__(f"payload needs {needed} slots, carrier has {available}")
        self.needed = needed
        self.available = available


class NoFrameError(StylocloakError):
    code = "no-frame"


class RaggedFrameError(StylocloakError):
    code = "ragged-frame"


# --- backends ----------------------------------------------------------------

class BackendError(StylocloakError):
    code = "backend"


class BackendUnavailableError(BackendError):
    code = "backend-unavailable"


class BackendMalformedResponseError(BackendError):
    code = "backend-malformed"


class BackendTimeoutError(BackendError):
    code = "backend-timeout"


# --- imitation ----------------------------------------------------------------

class EmptyPoolError(StylocloakError):
    code = "empty-pool"


class PayloadLostError(StylocloakError):
    code = "payload-lost"


# --- selection -----------------------------------------------------------------

class EmptyInputError(StylocloakError):
    code = "empty-input"


class LengthMismatchError(StylocloakError):
    code = "length-mismatch"


class SingleClassError(StylocloakError):
    code = "single-class"


class ArityMismatchError(StylocloakError):
    code = "arity-mismatch"


# --- attribution ----------------------------------------------------------------

class EmptyCorpusError(StylocloakError):
    code = "empty-corpus"


class DegenerateCorpusError(StylocloakError):
    code = "degenerate-corpus"


class InvalidMatrixError(StylocloakError):
    code = "invalid-matrix"


# --- corpus / datasets ------------------------------------------------------------

class DuplicateIdsError(StylocloakError):
    code = "duplicate-ids"


class BadHeaderError(ConfigError):
    code = "bad-header"


class BadLabelError(ConfigError):
    code = "bad-label"

    def __init__(self, row, value):
        super().__init__(f"row {row}: label must be 0 or 1, got {value!r}")
        self.row = row
        self.value = value


class RomanRangeError(StylocloakError):
    code = "roman-out-of-range"
