from stable_pieces.commands.base import load_datum
from stable_pieces.config import RunConfig
from stable_pieces.report import Report
from stable_pieces.wonderful import CSV_COLUMNS, build_atlas, per_J_totals


def run_wonderful(cfg: RunConfig) -> Report:
    datum = load_datum(cfg)
    atlas = build_atlas(datum, cfg.guards)
    totals = per_J_totals(atlas)
    passed = atlas.total_holds and all(total.holds for total in totals)
    payload = atlas.to_json()
    payload["total_expanded"] = str(atlas.total)
    payload["per_J"] = [total.to_json() for total in totals]
    return Report(
        command="wonderful",
        title=f"Completion atlas of {datum.type_spec}",
        payload=payload,
        rows=[row.to_csv_row() for row in atlas.rows],
        columns=CSV_COLUMNS,
        footer=[f"total = {atlas.total}", f"dim = {atlas.total.degree}"],
        passed=passed,
    )
