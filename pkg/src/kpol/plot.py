"""Static log-log plots written as plain SVG."""

import math
from xml.sax.saxutils import escape

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def loglog_svg(series, title="", xlabel="n", ylabel="count", width=480, height=360):
    """SVG text plotting ``series`` (label -> list of (x, y), all positive) on log axes."""
    pts = [(x, y) for data in series.values() for x, y in data if x > 0 and y > 0]
    margin = 56
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if pts:
        lx = [math.log10(x) for x, _ in pts]
        ly = [math.log10(y) for _, y in pts]
        x0, x1 = min(lx), max(lx) or 1
        y0, y1 = min(ly), max(ly)
        x1 = x1 if x1 > x0 else x0 + 1
        y1 = y1 if y1 > y0 else y0 + 1

        def px(v):
            return margin + (math.log10(v) - x0) / (x1 - x0) * (width - 2 * margin)

        def py(v):
            return height - margin - (math.log10(v) - y0) / (y1 - y0) * (height - 2 * margin)

        out.append(
            f'<path d="M{margin} {margin} V{height - margin} H{width - margin}" stroke="black" fill="none"/>'
        )
        for i, (label, data) in enumerate(series.items()):
            data = sorted((x, y) for x, y in data if x > 0 and y > 0)
            if not data:
                continue
            color = COLORS[i % len(COLORS)]
            path = " ".join(f"{'M' if j == 0 else 'L'}{px(x):.1f} {py(y):.1f}" for j, (x, y) in enumerate(data))
            out.append(f'<path d="{path}" stroke="{color}" fill="none"/>')
            for x, y in data:
                out.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="2.5" fill="{color}"/>')
            out.append(
                f'<text x="{width - margin + 4}" y="{margin + 14 * i}" fill="{color}">{escape(str(label))}</text>'
            )
        out.append(f'<text x="{margin}" y="{height - margin + 16}">{10 ** x0:.3g}</text>')
        out.append(f'<text x="{width - margin}" y="{height - margin + 16}" text-anchor="end">{10 ** x1:.3g}</text>')
        out.append(f'<text x="{margin - 4}" y="{height - margin}" text-anchor="end">{10 ** y0:.3g}</text>')
        out.append(f'<text x="{margin - 4}" y="{margin + 4}" text-anchor="end">{10 ** y1:.3g}</text>')
    out.append(f'<text x="{width / 2}" y="{height - 12}" text-anchor="middle">{escape(xlabel)} (log)</text>')
    out.append(
        f'<text x="14" y="{height / 2}" text-anchor="middle" transform="rotate(-90 14 {height / 2})">'
        f"{escape(ylabel)} (log)</text>"
    )
    out.append(f'<text x="{width / 2}" y="20" text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_loglog_svg(path, series, **kw):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(loglog_svg(series, **kw))
