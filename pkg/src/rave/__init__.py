"""Turn crowdsourced A-B assessment results into explorable faceted collections.

The pipeline: ingest a delimited task-results table, annotate queries,
compute label/worker/ranker analytics, render debranded result-page images,
and emit a Pivot CXML document plus an Exhibit-style bundle served over a
small read-only JSON API.
"""

from .analytics import (
    AnalyticsReport,
    FacetSelection,
    PreferenceReport,
    UnitSummary,
    Winner,
    WorkerSummary,
    apply_selection,
    compute_report,
    facet_counts,
    normalize_preference,
    preference_report,
    report_to_obj,
    unit_summaries,
    worker_summaries,
)
from .annotate import (
    Gazetteer,
    annotate_query,
    annotate_records,
    classify_query_type,
    detect_entity,
    query_length,
)
from .errors import (
    BundleError,
    CollectionError,
    ConfigError,
    CxmlError,
    DatasetError,
    ExhibitError,
    MalformedQueryError,
    RaveError,
    RenderError,
    ServeError,
    UnknownFacetError,
)
from .exhibit import emit_exhibit_html, emit_exhibit_json, export_bundle, facet_key
from .ingest import (
    ColumnMapping,
    FacetBinding,
    IngestReport,
    parse_config,
    parse_results,
    records_to_table,
)
from .model import (
    Annotations,
    AssessmentRecord,
    AssignmentMeta,
    Collection,
    CollectionItem,
    EntityKind,
    FacetDefinition,
    FacetKind,
    Label,
    QueryType,
    SerpContent,
    SerpResult,
    build_collection,
    default_facets,
)
from .pivot import CXML_ELEMENTS, emit_cxml, parse_cxml, thumbnail_ref_for
from .render import (
    BRAND_DENYLIST,
    ImagePair,
    find_branding,
    find_image_pairs,
    make_thumbnail,
    render_dataset,
    render_serp,
)
from .serialization import canonical_json, records_from_json, records_to_json
from .server import (
    ServerConfig,
    facets_payload,
    items_payload,
    make_server,
    selection_from_query,
    serve,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticsReport",
    "Annotations",
    "AssessmentRecord",
    "AssignmentMeta",
    "BRAND_DENYLIST",
    "BundleError",
    "CXML_ELEMENTS",
    "Collection",
    "CollectionError",
    "CollectionItem",
    "ColumnMapping",
    "ConfigError",
    "CxmlError",
    "DatasetError",
    "EntityKind",
    "ExhibitError",
    "FacetBinding",
    "FacetDefinition",
    "FacetKind",
    "FacetSelection",
    "Gazetteer",
    "ImagePair",
    "IngestReport",
    "Label",
    "MalformedQueryError",
    "PreferenceReport",
    "QueryType",
    "RaveError",
    "RenderError",
    "SerpContent",
    "SerpResult",
    "ServeError",
    "ServerConfig",
    "UnitSummary",
    "UnknownFacetError",
    "Winner",
    "WorkerSummary",
    "annotate_query",
    "annotate_records",
    "apply_selection",
    "build_collection",
    "canonical_json",
    "classify_query_type",
    "compute_report",
    "default_facets",
    "detect_entity",
    "emit_cxml",
    "emit_exhibit_html",
    "emit_exhibit_json",
    "export_bundle",
    "facet_counts",
    "facet_key",
    "facets_payload",
    "find_branding",
    "find_image_pairs",
    "items_payload",
    "make_server",
    "make_thumbnail",
    "normalize_preference",
    "parse_config",
    "parse_cxml",
    "parse_results",
    "preference_report",
    "query_length",
    "records_from_json",
    "records_to_json",
    "records_to_table",
    "render_dataset",
    "render_serp",
    "report_to_obj",
    "selection_from_query",
    "serve",
    "thumbnail_ref_for",
    "unit_summaries",
    "worker_summaries",
]
