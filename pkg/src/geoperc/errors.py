"""Exception hierarchy shared across the package."""


class GeopercError(Exception):
    """Base class; `code` is the short machine-readable tag used by the CLI/service."""

    code = "error"


class EmptyModelError(GeopercError):
    """A probability was requested from a cell with no usable counts."""

    code = "empty-model"


class EmptyCorpusError(GeopercError):
    """A model build ended up with zero retained posts."""

    code = "empty-corpus"


class EmptyQueryError(GeopercError):
    """The query phrase normalized to zero tokens."""

    code = "empty-query"


class ModelLoadError(GeopercError):
    code = "model-load"


class MissingManifestError(ModelLoadError):
    code = "missing-manifest"


class VersionMismatchError(ModelLoadError):
    code = "version-mismatch"


class MissingFileError(ModelLoadError):
    code = "missing-file"


class CorruptTableError(ModelLoadError):
    code = "corrupt-table"
