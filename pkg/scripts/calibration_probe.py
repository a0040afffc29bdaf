"""Developer probe: run both bundled fixtures through the pipeline and
print the quantities the acceptance bands care about.
"""

import time

from align_audit import AuditConfig, run_audit
from align_audit import fixtures


def probe(fixture):
    cfg = AuditConfig(
        data_path=str(fixture.path),
        target=fixture.target,
        features=fixture.features,
        dataset_name=fixture.name,
    )
    t0 = time.perf_counter()
    result = run_audit(cfg)
    elapsed = time.perf_counter() - t0
    report = result.report
    print(f"== {fixture.name} ({elapsed:.1f}s total, stages {result.timings})")
    print(f"   accuracies: {report.accuracies}")
    print(f"   rho: {report.rho}")
    for method, ranking in report.rankings.items():
        ordered = sorted(zip(ranking.ranks, ranking.feature_names, ranking.scores))
        desc = ", ".join(f"{n}={s:+.3f}(r{r:g})" for r, n, s in ordered)
        print(f"   {method}: {desc}")


if __name__ == "__main__":
    probe(fixtures.TITANIC)
    probe(fixtures.PIMA)
