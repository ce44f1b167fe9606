"""Exception hierarchy shared by every robaudit module.

Each exception carries a stable machine-readable ``code`` so the HTTP
layer and the CLI can map module errors without string matching.
"""


class RobAuditError(Exception):
    """Base class for all errors raised by robaudit."""

    code = "error"


class ValidationError(RobAuditError):
    code = "validation_error"


class NotFoundError(RobAuditError):
    code = "not_found"

    def __init__(self, kind: str, key: str):
        super().__init__(f"{kind} not found: {key!r}")
        self.kind = kind
        self.key = key


class CatalogIntegrityError(RobAuditError):
    """Embedded catalog data failed its own invariants; guards bad edits."""

    code = "catalog_integrity_error"


# --- CVSS vector / scoring -------------------------------------------------

class VectorError(RobAuditError):
    code = "vector_error"


class MalformedVectorError(VectorError):
    code = "malformed_vector"

    def __init__(self, position: int, reason: str):
        super().__init__(f"segment {position}: {reason}")
        self.position = position
        self.reason = reason


class UnknownPrefixError(VectorError):
    code = "unknown_prefix"


class MissingMetricError(VectorError):
    code = "missing_metric"

    def __init__(self, name: str):
        super().__init__(f"missing metric: {name}")
        self.name = name


class DuplicateMetricError(VectorError):
    code = "duplicate_metric"

    def __init__(self, name: str):
        super().__init__(f"duplicate metric: {name}")
        self.name = name


class UnsupportedMetricGroupError(VectorError):
    """Temporal/environmental segments are rejected; base metrics only."""

    code = "unsupported_metric_group"


class OutOfRangeError(RobAuditError):
    code = "out_of_range"


# --- Workflow --------------------------------------------------------------

class PhaseViolationError(RobAuditError):
    code = "phase_violation"


class AlreadyFinalError(RobAuditError):
    code = "already_final"


class InvalidTargetError(RobAuditError):
    code = "invalid_target"


class DuplicateSurfaceItemError(RobAuditError):
    code = "duplicate_surface_item"


class AuthorizationGateViolationError(RobAuditError):
    """Exploitation attempted without a covering authorization window."""

    code = "authorization_gate_violation"


# --- Ingest parsers --------------------------------------------------------

class XmlSyntaxError(RobAuditError):
    code = "xml_syntax_error"

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class SchemaError(RobAuditError):
    code = "schema_error"

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class EmptyDocumentError(RobAuditError):
    code = "empty_document"


class LineSyntaxError(RobAuditError):
    code = "line_syntax_error"

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


# --- Persistence -----------------------------------------------------------

class MalformedDocumentError(RobAuditError):
    code = "malformed_document"


class SchemaVersionUnsupportedError(RobAuditError):
    code = "schema_version_unsupported"


class IntegrityError(RobAuditError):
    """A stored document contains dangling references or inconsistent state."""

    code = "integrity_error"

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class EmptyInputError(RobAuditError):
    code = "empty_input"


class ConflictError(RobAuditError):
    """Stale revision token on a mutating store operation."""

    code = "conflict"


class StoreError(RobAuditError):
    code = "store_error"
