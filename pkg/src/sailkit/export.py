"""Display exports: SVG drawings of planar sails, OBJ meshes of spatial ones.

These files are for looking at; coordinates of cone rays are rounded.
"""

from .errors import WrongDimension


def _fmt(x):
    return f"{float(x):.6f}".rstrip("0").rstrip(".")


def _clip_ray(d, box):
    """Endpoint of the ray from 0 in direction d where it leaves [-box, box]^2."""
    t = min(box / abs(c) for c in d if c != 0)
    return d[0] * t, d[1] * t


def patch_svg(patch, size=480, margin=1):
    if patch.n != 2:
        raise WrongDimension("SVG export draws planar sails")
    from .cf2d import _polyline
    path = _polyline(patch)
    pts = path or list(patch.vertices)
    box = max(max(abs(c) for p in pts for c in p), 1) + margin
    scale = size / (2 * box)

    def xy(p):
        return _fmt((p[0] + box) * scale), _fmt((box - p[1]) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           '<rect width="100%" height="100%" fill="white"/>']
    o = xy((0, 0))
    for r in patch.cone.rays:
        end = xy(_clip_ray([float(c) for c in r.coords], box))
        out.append(f'<line x1="{o[0]}" y1="{o[1]}" x2="{end[0]}" y2="{end[1]}" stroke="grey" stroke-dasharray="4 3"/>')
    if len(path) >= 2:
        coords = " ".join(",".join(xy(p)) for p in path)
        out.append(f'<polyline points="{coords}" fill="none" stroke="black" stroke-width="1.5"/>')
    for p in pts:
        x, y = xy(p)
        out.append(f'<circle cx="{x}" cy="{y}" r="2.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def patch_obj(patch):
    """Certified faces as a triangle mesh (fans from the first vertex)."""
    if patch.n != 3:
        raise WrongDimension("OBJ export draws spatial sails")
    used = sorted({i for f in patch.faces if f.certified for i in f.vertices})
    idx = {v: k + 1 for k, v in enumerate(used)}
    lines = ["# sailkit certified faces"]
    lines += ["v " + " ".join(str(c) for c in patch.vertices[i]) for i in used]
    for f in patch.faces:
        if not f.certified:
            continue
        vs = [idx[i] for i in f.vertices]
        for k in range(1, len(vs) - 1):
            lines.append(f"f {vs[0]} {vs[k]} {vs[k + 1]}")
    return "\n".join(lines) + "\n"
