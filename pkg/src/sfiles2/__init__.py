"""Bidirectional codec between flowsheet graphs and SFILES 2.0 strings."""

from .canon import MorganState, RankTable, TAG_RANK, break_ties, morgan_iterate, rank_graph
from .encode import GENERALIZED, NUMBERED, EmissionPlan, SfilesString, emit, encode, traverse
from .errors import (
    EncodeError,
    GraphInvariantError,
    ParseError,
    SchemaError,
    SfilesError,
)
from .model import (
    COLUMN_TAGS,
    MATERIAL,
    SIGNAL,
    EdgeAttr,
    FlowsheetGraph,
    NodeRef,
    load_json,
    save_json,
)
from .parse import (
    Diagnostic,
    ParseDiagnostics,
    RoundtripReport,
    Token,
    parse,
    parse_sfiles,
    roundtrip_check,
    tokenize,
)
from .validate import REGISTRY, DegreeSpec, GraphDiagnostic, UnitOp, check_graph

__version__ = "0.1.0"

__all__ = [
    "COLUMN_TAGS",
    "Diagnostic",
    "DegreeSpec",
    "EdgeAttr",
    "EmissionPlan",
    "EncodeError",
    "FlowsheetGraph",
    "GENERALIZED",
    "GraphDiagnostic",
    "GraphInvariantError",
    "MATERIAL",
    "MorganState",
    "NUMBERED",
    "NodeRef",
    "ParseDiagnostics",
    "ParseError",
    "REGISTRY",
    "RankTable",
    "RoundtripReport",
    "SIGNAL",
    "SchemaError",
    "SfilesError",
    "SfilesString",
    "TAG_RANK",
    "Token",
    "UnitOp",
    "break_ties",
    "check_graph",
    "emit",
    "encode",
    "load_json",
    "morgan_iterate",
    "parse",
    "parse_sfiles",
    "rank_graph",
    "roundtrip_check",
    "save_json",
    "tokenize",
    "traverse",
    "__version__",
]
