class EmbedExportError(Exception):
    """Base class for every error this package raises on purpose."""


class EncoderError(EmbedExportError):
    """Model could not be loaded or refused to encode."""


class ExportError(EmbedExportError):
    """Export job cannot run: bad parameters, unreadable/empty input, model failure."""
