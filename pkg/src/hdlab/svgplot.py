"""Tiny static-SVG charts: histograms, line charts, scatter plots.

Self-contained markup with fixed fonts and a small palette; no plotting
dependency. Output is deterministic for identical inputs (floats rendered
with %.6g). These figures are companions to the CSV tables, not replacements.
"""

import numpy as np

PALETTE = ("#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4",
           "#8c613c", "#dc7ec0", "#797979")

W, H = 640, 420
ML, MR, MT, MB = 64, 20, 40, 48


def _f(v):
    return "%.6g" % float(v)


class _Axes:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0

    def px(self, x):
        return ML + (x - self.x0) / (self.x1 - self.x0) * (W - ML - MR)

    def py(self, y):
        return H - MB - (y - self.y0) / (self.y1 - self.y0) * (H - MT - MB)

    def frame(self, title, xlabel, ylabel):
        parts = [
            '<rect x="%g" y="%g" width="%g" height="%g" fill="none" stroke="#333"/>'
            % (ML, MT, W - ML - MR, H - MT - MB)
        ]
        for t in np.linspace(self.x0, self.x1, 5):
            px = self.px(t)
            parts.append('<line x1="%g" y1="%g" x2="%g" y2="%g" stroke="#333"/>'
                         % (px, H - MB, px, H - MB + 4))
            parts.append('<text x="%g" y="%g" font-size="11" text-anchor="middle">%s</text>'
                         % (px, H - MB + 16, _f(t)))
        for t in np.linspace(self.y0, self.y1, 5):
            py = self.py(t)
            parts.append('<line x1="%g" y1="%g" x2="%g" y2="%g" stroke="#333"/>'
                         % (ML - 4, py, ML, py))
            parts.append('<text x="%g" y="%g" font-size="11" text-anchor="end">%s</text>'
                         % (ML - 7, py + 4, _f(t)))
        if title:
            parts.append('<text x="%g" y="%g" font-size="14" text-anchor="middle">%s</text>'
                         % (W / 2, MT - 14, title))
        if xlabel:
            parts.append('<text x="%g" y="%g" font-size="12" text-anchor="middle">%s</text>'
                         % (ML + (W - ML - MR) / 2, H - 10, xlabel))
        if ylabel:
            parts.append(
                '<text x="14" y="%g" font-size="12" text-anchor="middle" '
                'transform="rotate(-90 14 %g)">%s</text>'
                % (MT + (H - MT - MB) / 2, MT + (H - MT - MB) / 2, ylabel)
            )
        return parts

    def legend(self, labels):
        parts = []
        for i, label in enumerate(labels):
            y = MT + 14 + 16 * i
            parts.append('<rect x="%g" y="%g" width="10" height="10" fill="%s"/>'
                         % (W - MR - 150, y - 9, PALETTE[i % len(PALETTE)]))
            parts.append('<text x="%g" y="%g" font-size="11">%s</text>'
                         % (W - MR - 136, y, label))
        return parts


def _write(path, body):
    doc = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
           'viewBox="0 0 %d %d" font-family="sans-serif">' % (W, H, W, H)]
    doc.extend(body)
    doc.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(doc) + "\n")


def histogram_svg(groups, path, bins=30, title="", xlabel="value"):
    """Overlaid density-normalized histograms, one color per labeled group."""
    arrays = {k: np.asarray(v, dtype=np.float64).ravel() for k, v in groups.items()}
    lo = min(float(a.min()) for a in arrays.values())
    hi = max(float(a.max()) for a in arrays.values())
    if hi <= lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, bins + 1)
    dens = {k: np.histogram(a, bins=edges, density=True)[0] for k, a in arrays.items()}
    top = max(float(d.max()) for d in dens.values()) or 1.0
    ax = _Axes((lo, hi), (0.0, top * 1.05))
    body = ax.frame(title, xlabel, "density")
    for i, (label, d) in enumerate(dens.items()):
        color = PALETTE[i % len(PALETTE)]
        for b in range(bins):
            if d[b] <= 0:
                continue
            x0, x1 = ax.px(edges[b]), ax.px(edges[b + 1])
            y = ax.py(d[b])
            body.append(
                '<rect x="%g" y="%g" width="%g" height="%g" fill="%s" fill-opacity="0.45"/>'
                % (x0, y, max(x1 - x0, 0.5), H - MB - y, color)
            )
    body.extend(ax.legend(list(dens)))
    _write(path, body)


def line_chart_svg(series, path, title="", xlabel="x", ylabel="y"):
    """Polyline per labeled (x, y) series on shared axes."""
    xs = np.concatenate([np.asarray(x, dtype=np.float64) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, dtype=np.float64) for _, y in series.values()])
    ax = _Axes((float(xs.min()), float(xs.max())), (float(ys.min()), float(ys.max())))
    body = ax.frame(title, xlabel, ylabel)
    for i, (label, (x, y)) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join("%g,%g" % (ax.px(a), ax.py(b)) for a, b in zip(x, y))
        body.append('<polyline points="%s" fill="none" stroke="%s" stroke-width="1.6"/>'
                    % (pts, color))
    body.extend(ax.legend(list(series)))
    _write(path, body)


def scatter_svg(groups, path, title="", xlabel="x", ylabel="y"):
    """Point cloud per labeled (x, y) group."""
    xs = np.concatenate([np.asarray(x, dtype=np.float64) for x, _ in groups.values()])
    ys = np.concatenate([np.asarray(y, dtype=np.float64) for _, y in groups.values()])
    ax = _Axes((float(xs.min()), float(xs.max())), (float(ys.min()), float(ys.max())))
    body = ax.frame(title, xlabel, ylabel)
    for i, (label, (x, y)) in enumerate(groups.items()):
        color = PALETTE[i % len(PALETTE)]
        for a, b in zip(x, y):
            body.append('<circle cx="%g" cy="%g" r="2.4" fill="%s" fill-opacity="0.75"/>'
                        % (ax.px(a), ax.py(b), color))
    body.extend(ax.legend(list(groups)))
    _write(path, body)
