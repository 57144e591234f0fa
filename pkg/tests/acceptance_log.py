"""Shared store for the one-line verdict of each acceptance criterion."""

RESULTS: dict[int, str] = {}


def record(number: int, title: str, records, elapsed: float, budget: float | None = None) -> bool:
    failed = [r for r in records if not r.passed]
    over = budget is not None and elapsed > budget
    ok = not failed and not over
    worst = max((r.max_residual for r in records if r.max_residual is not None), default=None)
    detail = f"{len(records)} checks"
    if worst is not None:
        detail += f", worst residual {worst:.2e}"
    detail += f", {elapsed:.1f}s"
    if budget is not None:
        detail += f" (budget {budget:.0f}s)"
    if failed:
        detail += "; failing: " + ", ".join(r.identity for r in failed[:6])
        if len(failed) > 6:
            detail += f" and {len(failed) - 6} more"
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title} -- {detail}"
    RESULTS[number] = line
    print(line)
    return ok
