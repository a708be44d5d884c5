"""Independent brute-force reference implementations used as test oracles.

Everything here is written with plain Python loops over pixels, deliberately
avoiding the vectorized production code paths.
"""

import math

from mfp.grid import Label


def brute_distance_to_zero(mask):
    """O(n^2) nearest-zero scan; out-of-bounds pixels count as zeros."""
    h, w = mask.shape
    zeros = [(r, c) for r in range(h) for c in range(w) if mask[r, c] == 0]
    out = [[0.0] * w for _ in range(h)]
    for r in range(h):
        for c in range(w):
            if mask[r, c] == 0:
                continue
            best = float(min(r + 1, c + 1, h - r, w - c))  # nearest out-of-bounds zero
            for zr, zc in zeros:
                d = math.hypot(r - zr, c - zc)
                if d < best:
                    best = d
            out[r][c] = best
    return out


def brute_components(mask):
    """Flood-fill 4-connected components, ordered (area desc, first pixel)."""
    h, w = mask.shape
    seen = set()
    comps = []
    for r in range(h):
        for c in range(w):
            if mask[r, c] == 1 and (r, c) not in seen:
                stack = [(r, c)]
                seen.add((r, c))
                pixels = []
                while stack:
                    pr, pc = stack.pop()
                    pixels.append((pr, pc))
                    for nr, nc in ((pr - 1, pc), (pr + 1, pc), (pr, pc - 1), (pr, pc + 1)):
                        if 0 <= nr < h and 0 <= nc < w and mask[nr, nc] == 1 and (nr, nc) not in seen:
                            seen.add((nr, nc))
                            stack.append((nr, nc))
                comps.append(sorted(pixels))
    comps.sort(key=lambda px: (-len(px), px[0]))
    return comps


def brute_deep_point(region_pixels, shape):
    """Pixel of the region farthest from its complement (incl. out-of-bounds),
    row-major tie-break."""
    h, w = shape
    region = set(region_pixels)
    best = None
    best_d = -1.0
    for r in range(h):
        for c in range(w):
            if (r, c) not in region:
                continue
            d = float(min(r + 1, c + 1, h - r, w - c))
            for zr in range(h):
                for zc in range(w):
                    if (zr, zc) not in region:
                        dd = math.hypot(r - zr, c - zc)
                        if dd < d:
                            d = dd
            if d > best_d:
                best_d = d
                best = (r, c)
    return best


def naive_modulate(p, click, history, params):
    """Per-pixel reference for the modulation pipeline (window, radius,
    calibrated max gamma, both assignment schemes, gamma correction)."""
    h, w = p.shape
    ur, uc = click.row, click.col
    fg = click.label is Label.FOREGROUND

    opposite = [c for c in history if c.label is not click.label]
    if opposite:
        radius = min(
            params.r_max,
            0.5 * min(math.hypot(ur - c.row, uc - c.col) for c in opposite),
        )
    else:
        radius = params.r_max

    p_u = float(p[ur, uc])
    q_u = min(max(p_u, params.eps), 1.0 - params.eps)
    if fg:
        big = max(1.0, math.log(q_u) / math.log(params.p_target_fg))
    else:
        big = max(1.0, math.log(params.p_target_bg) / math.log(q_u))

    window = [
        (r, c)
        for r in range(h)
        for c in range(w)
        if (r - ur) ** 2 + (c - uc) ** 2 <= radius * radius
    ]

    use_prob_scheme = click.index <= params.scheme_switch_index
    if use_prob_scheme:
        dists = sorted((float(p[r, c]) - p_u) ** 2 for r, c in window)
        d_bar = dists[(len(dists) - 1) // 2]

    out = [[float(p[r, c]) for c in range(w)] for r in range(h)]
    for r, c in window:
        if use_prob_scheme:
            d = (float(p[r, c]) - p_u) ** 2
            if d_bar == 0.0:
                gamma = big if d == 0.0 else 1.0
            elif d > d_bar:
                gamma = 1.0
            else:
                gamma = (big - 1.0) * ((d_bar - d) ** 3 / d_bar**3) + 1.0
        else:
            if radius == 0.0:
                gamma = big
            else:
                t = math.hypot(r - ur, c - uc) / radius
                gamma = big * (1.0 - t) + t
        q = min(max(float(p[r, c]), params.eps), 1.0 - params.eps)
        out[r][c] = q ** (1.0 / gamma) if fg else q**gamma
    return out
