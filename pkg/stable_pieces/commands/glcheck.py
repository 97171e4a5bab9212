from stable_pieces.config import RunConfig
from stable_pieces.glmodel import ModelConfig, brute_force_partition
from stable_pieces.report import Report

BUCKET_COLUMNS = ["signature", "size", "matched_sigma", "predicted", "labels"]


def run_glcheck(cfg: RunConfig) -> Report:
    """Exhaustive GL_d(F_q) partition against the enumerated pieces."""
    config = ModelConfig(mode=cfg.mode, d=cfg.d, q=cfg.q, blocks=cfg.blocks, sigma=cfg.sigma)
    result = brute_force_partition(config, cfg.guards)
    rows = [
        {
            "signature": bucket.signature_text,
            "size": bucket.size,
            "matched_sigma": bucket.matched_text or "-",
            "predicted": bucket.predicted,
            "labels": ",".join(map(str, bucket.labels)),
        }
        for bucket in result.buckets
    ]
    return Report(
        command="glcheck",
        title=f"GL_{config.d}(F_{config.q}) model, {config.mode}",
        payload=result.to_json(),
        rows=rows,
        columns=BUCKET_COLUMNS,
        footer=[
            f"{result.total} quadruples in {len(result.buckets)} buckets",
            f"verdict: {'pass' if result.verdict else 'fail'}",
        ],
        passed=result.verdict,
    )
