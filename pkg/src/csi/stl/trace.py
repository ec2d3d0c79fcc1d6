from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

DT_TOLERANCE = 1e-9
_DECIMAL = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Trace:
    """Uniformly sampled multivariate signal.

    ``samples[k, j]`` is the value of ``var_names[j]`` at time ``t0 + k * dt``.
    """

    var_names: tuple[str, ...]
    dt: float
    samples: np.ndarray
    t0: float = 0.0
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.var_names)
        samples = np.array(self.samples, dtype=float)
        if samples.ndim == 1 and len(names) == 1:
            samples = samples[:, None]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if "time" in names:
            raise ValueError("'time' is reserved for the sample clock")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if samples.ndim != 2 or samples.shape[1] != len(names):
            raise ValueError(f"samples must have shape (n, {len(names)}), got {samples.shape}")
        if samples.shape[0] < 1:
            raise ValueError("a trace needs at least one sample")
        samples.setflags(write=False)
        object.__setattr__(self, "var_names", names)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "_index", {n: j for j, n in enumerate(names)})

    @classmethod
    def from_columns(cls, columns: Mapping[str, Iterable[float]], dt: float, t0: float = 0.0) -> "Trace":
        names = tuple(columns)
        data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
        return cls(names, dt, data, t0)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self))

    def has(self, name: str) -> bool:
        return name in self._index

    def column(self, name: str) -> np.ndarray:
        try:
            return self.samples[:, self._index[name]]
        except KeyError:
            raise KeyError(f"trace has no variable {name!r}") from None

    def project(self, names: Iterable[str]) -> "Trace":
        """Projection onto a subset of variables, kept in trace order."""
        wanted = set(names)
        missing = wanted - set(self.var_names)
        if missing:
            raise KeyError(f"trace has no variables {sorted(missing)}")
        keep = [j for j, n in enumerate(self.var_names) if n in wanted]
        return Trace(tuple(self.var_names[j] for j in keep), self.dt, self.samples[:, keep], self.t0)

    # -- CSV ---------------------------------------------------------------

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("time",) + self.var_names)
        for t, row in zip(self.times, self.samples):
            writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "Trace":
        """Read a trace from a path or a file-like object.

        The first header must be ``time``; time stamps must increase with a
        constant step (within 1e-9).  A single-row file gets ``dt = 1``.
        """
        if hasattr(source, "read"):
            text = source.read()
        else:
            text = Path(source).read_text()
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if not rows:
            raise TraceFormatError("empty trace file")
        header = [h.strip() for h in rows[0]]
        if not header or header[0] != "time":
            raise TraceFormatError("first column header must be 'time'")
        names = header[1:]
        if len(set(names)) != len(names) or "" in names:
            raise TraceFormatError("column headers must be distinct and non-empty")
        values = []
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != len(header):
                raise TraceFormatError(f"row {lineno}: expected {len(header)} fields, got {len(row)}")
            cells = [c.strip() for c in row]
            for c in cells:
                if not _DECIMAL.match(c):
                    raise TraceFormatError(f"row {lineno}: not a decimal number: {c!r}")
            values.append([float(c) for c in cells])
        if not values:
            raise TraceFormatError("trace file has no samples")
        data = np.array(values)
        times = data[:, 0]
        if len(times) > 1:
            steps = np.diff(times)
            dt = steps[0]
            if dt <= 0 or np.any(steps <= 0):
                raise TraceFormatError("time stamps must be strictly increasing")
            bad = np.flatnonzero(np.abs(steps - dt) > DT_TOLERANCE)
            if bad.size:
                raise TraceFormatError(f"row {bad[0] + 3}: non-uniform time step")
        else:
            dt = 1.0
        return cls(tuple(names), float(dt), data[:, 1:], float(times[0]))
