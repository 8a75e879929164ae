"""
Exceptions raised by the command layer
"""

from core.exceptions import DataError, LgcpError


class MissingArtifactError(DataError):
    """A command needs the output of an earlier command"""

    def __init__(self, path, producer: str):
        super().__init__(f"{path} not found; run '{producer}' first", {"path": str(path), "producer": producer})


class TemplateRenderError(LgcpError):
    """Raised when a report template cannot be rendered"""
    pass


class ArtifactMismatchError(DataError):
    """An earlier command's output does not line up with the current pixel table"""

    def __init__(self, path, fitted_rows: int, pixels: int):
        super().__init__(f"{path} does not match the pixel table row for row",
                         {"path": str(path), "fitted_rows": fitted_rows, "pixels": pixels})
