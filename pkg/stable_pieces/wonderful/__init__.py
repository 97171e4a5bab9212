from .atlas import (
    CSV_COLUMNS,
    AtlasRow,
    BoundaryTotal,
    CompletionAtlas,
    CsIndex,
    boundary_data,
    build_atlas,
    cs_index,
    per_J_totals,
)

__all__ = [
    "CSV_COLUMNS",
    "AtlasRow",
    "BoundaryTotal",
    "CompletionAtlas",
    "CsIndex",
    "boundary_data",
    "build_atlas",
    "cs_index",
    "per_J_totals",
]
