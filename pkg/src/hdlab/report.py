"""Experiment report container with deterministic CSV output.

Reports carry their full parameterization, so a run can be reconstructed
from its emitted files alone. Floats are written with repr (shortest
round-trip form), which makes re-running with the same inputs byte-identical.
Wall-clock time lives in the metadata file only, never in table CSVs.
"""

import csv
import os
from dataclasses import dataclass, field

import numpy as np


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


@dataclass
class ExperimentReport:
    """experiment: short id; params: full input parameterization;
    tables: name -> (header, rows); summary: headline numbers;
    wall_clock: seconds spent producing the report."""

    experiment: str
    params: dict
    tables: dict
    summary: dict = field(default_factory=dict)
    wall_clock: float = 0.0

    def table(self, name):
        header, rows = self.tables[name]
        return header, rows

    def write(self, outdir):
        """Write one CSV per table plus a key=value metadata file.

        Returns the list of paths written. Table CSVs are bit-reproducible
        for identical inputs; the metadata file carries wall_clock and is
        exempt from that guarantee.
        """
        os.makedirs(outdir, exist_ok=True)
        paths = []
        for name in self.tables:
            header, rows = self.tables[name]
            path = os.path.join(outdir, "%s_%s.csv" % (self.experiment, name))
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(header)
                for row in rows:
                    w.writerow([_cell(v) for v in row])
            paths.append(path)
        meta = os.path.join(outdir, "%s_params.txt" % self.experiment)
        with open(meta, "w") as fh:
            fh.write("experiment=%s\n" % self.experiment)
            for k in self.params:
                fh.write("%s=%s\n" % (k, _fmt_param(self.params[k])))
            for k in self.summary:
                fh.write("summary.%s=%s\n" % (k, _cell(self.summary[k])))
            fh.write("wall_clock=%.3f\n" % self.wall_clock)
        paths.append(meta)
        return paths


def _fmt_param(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return ",".join(_cell(x) for x in v)
    if isinstance(v, dict):
        return ";".join("%s:%s" % (k, _cell(v[k])) for k in v)
    return _cell(v)
