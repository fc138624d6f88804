"""Exception types shared across the pipeline."""


class RaveError(Exception):
    """Base class for every error this package raises on purpose."""


class ConfigError(RaveError):
    """Invalid or incomplete column-mapping configuration."""


class DatasetError(RaveError):
    """Fatal problem with an input table or records file."""


class CollectionError(RaveError):
    """A collection or one of its items violates the model contract."""


class CxmlError(RaveError):
    """Malformed or non-conformant CXML document."""


class ExhibitError(RaveError):
    """Exhibit emission failed, e.g. a facet key collision."""


class RenderError(RaveError):
    """SERP rendering or thumbnail scaling failed."""


class BundleError(RaveError):
    """Export bundle could not be written."""


class ServeError(RaveError):
    """Server configuration or bundle loading failed."""


class UnknownFacetError(RaveError):
    """A selection referenced a facet the collection does not define."""


class MalformedQueryError(RaveError):
    """A facet selection carried a value the facet kind cannot hold."""
