"""Time series container and its CSV round trip.

Schema (header is bit-exact): step,frac_steps,L1,L1_frac,alpha,n_components,
n_edges.  frac_steps = step/n and L1_frac = L1/n are rendered with 9
significant digits; the integer columns carry the full state.  Leading
comment lines start with '#': the writer always emits '# n=<n>' (so a reader
can recover n without guessing) and optionally echoes the producing command
line.  alpha is 0 for processes that do not define it.
"""

import os
import tempfile
from dataclasses import dataclass
from typing import Optional

import numpy as np

HEADER = "step,frac_steps,L1,L1_frac,alpha,n_components,n_edges"


class CsvSchemaError(ValueError):
    pass


@dataclass
class TimeSeries:
    n: int
    step: np.ndarray
    l1: np.ndarray
    alpha: np.ndarray
    n_components: np.ndarray
    n_edges: np.ndarray
    comment: Optional[str] = None

    def __post_init__(self):
        lens = {len(self.step), len(self.l1), len(self.alpha),
                len(self.n_components), len(self.n_edges)}
        if len(lens) != 1:
            raise ValueError("column length mismatch")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def __len__(self) -> int:
        return len(self.step)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (self.n == other.n
                and np.array_equal(self.step, other.step)
                and np.array_equal(self.l1, other.l1)
                and np.array_equal(self.alpha, other.alpha)
                and np.array_equal(self.n_components, other.n_components)
                and np.array_equal(self.n_edges, other.n_edges))


def _fmt_frac(num: int, den: int) -> str:
    return "%.9g" % (num / den)


def write_csv(series: TimeSeries, path) -> None:
    n = series.n
    lines = [f"# n={n}"]
    if series.comment:
        for c in series.comment.splitlines():
            lines.append(f"# {c}")
    lines.append(HEADER)
    for i in range(len(series)):
        t = int(series.step[i])
        l1 = int(series.l1[i])
        lines.append(",".join((
            str(t),
            _fmt_frac(t, n),
            str(l1),
            _fmt_frac(l1, n),
            str(int(series.alpha[i])),
            str(int(series.n_components[i])),
            str(int(series.n_edges[i])),
        )))
    data = "\n".join(lines) + "\n"
    # write whole-file-or-nothing so a failed run never leaves a partial CSV
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path) -> TimeSeries:
    n = None
    comment_lines = []
    rows = []
    with open(path) as f:
        lineno = 0
        header_seen = False
        for raw in f:
            lineno += 1
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                if header_seen:
                    raise CsvSchemaError(f"{path}:{lineno}: comment after header")
                body = line[1:].strip()
                if body.startswith("n=") and n is None:
                    try:
                        n = int(body[2:])
                    except ValueError:
                        raise CsvSchemaError(
                            f"{path}:{lineno}: bad n comment {body!r}") from None
                else:
                    comment_lines.append(body)
                continue
            if not header_seen:
                if line != HEADER:
                    raise CsvSchemaError(
                        f"{path}:{lineno}: bad header {line!r}, expected {HEADER!r}")
                header_seen = True
                continue
            parts = line.split(",")
            if len(parts) != 7:
                raise CsvSchemaError(
                    f"{path}:{lineno}: expected 7 fields, got {len(parts)}")
            try:
                rows.append((int(parts[0]), int(parts[2]), int(parts[4]),
                             int(parts[5]), int(parts[6])))
            except ValueError as e:
                raise CsvSchemaError(f"{path}:{lineno}: {e}") from None
        if not header_seen:
            raise CsvSchemaError(f"{path}:{lineno or 1}: missing header")
    if n is None:
        raise CsvSchemaError(f"{path}: missing '# n=' comment")
    arr = np.array(rows, dtype=np.int64).reshape(-1, 5)
    return TimeSeries(
        n=n,
        step=arr[:, 0].copy(),
        l1=arr[:, 1].copy(),
        alpha=arr[:, 2].copy(),
        n_components=arr[:, 3].copy(),
        n_edges=arr[:, 4].copy(),
        comment="\n".join(comment_lines) if comment_lines else None,
    )


def write_ensemble_csv(rows: list, path) -> None:
    """Summary table, one row per seed: seed,T_C,L1_at_TC,L1_after_window,
    window_sqrt_half.  Missing values render as NA."""
    def cell(v):
        return "NA" if v is None else str(v)

    lines = ["seed,T_C,L1_at_TC,L1_after_window,window_sqrt_half"]
    for seed, t_c, l1_tc, l1_after, sqrt_half in rows:
        lines.append(",".join((str(seed), cell(t_c), cell(l1_tc),
                               cell(l1_after), cell(sqrt_half))))
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
