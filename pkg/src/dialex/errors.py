"""Exception types shared across the pipeline."""


class DialexError(Exception):
    """Base class for all package errors."""


class CorpusDecodeError(DialexError):
    """Input is not valid UTF-8."""

    def __init__(self, byte_offset: int, detail: str = ""):
        self.byte_offset = byte_offset
        msg = f"invalid UTF-8 at byte offset {byte_offset}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class CorpusFormatError(DialexError):
    """A corpus or dataset file violates its column format."""

    def __init__(self, line_number: int, detail: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {detail}")


class PipelineError(DialexError):
    """An upstream stage contract was violated (e.g. unfiltered shared tokens)."""


class ConfigError(DialexError):
    """Invalid pipeline configuration or stage preconditions."""


class UnknownPairError(DialexError):
    """An annotation refers to a pair id absent from the task table."""


class LabelValidationError(DialexError):
    """A label is outside the closed three-class set."""


class DatasetFormatError(DialexError):
    """A dataset file does not match the published TSV schema."""

    def __init__(self, line_number: int, detail: str):
        super().__init__(f"line {line_number}: {detail}")
        self.line_number = line_number
        self.detail = detail


class TransportError(DialexError):
    """A model endpoint could not be reached after all retries."""


class ProtocolError(DialexError):
    """A model endpoint answered with an unusable response body."""


class TemplateError(DialexError):
    """A prompt template file is malformed or misses a placeholder."""


class ScoringError(DialexError):
    """Predictions and gold items do not line up."""


class PartialRunError(DialexError):
    """A multi-request run stopped early; completed work was persisted."""

    def __init__(self, message: str, resume_path: str):
        self.resume_path = resume_path
        super().__init__(f"{message} (completed work persisted at {resume_path})")
