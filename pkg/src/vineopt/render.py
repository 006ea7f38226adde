"""Static SVG rendering of a task scene and an evaluated solution.

All geometry is emitted in world coordinates inside a single group whose
transform maps world to viewport (translate + uniform scale with a y flip),
so the numbers in the file equal the chain coordinates exactly and can be
audited geometrically. Floats are written with repr for byte determinism.
"""

from __future__ import annotations

import math
from typing import Optional

from .fitness import completed_chain
from .geometry import Point2
from .model import Solution, Task

CHAIN_COLORS = (
    "#0969da",
    "#cf222e",
    "#1a7f37",
    "#8250df",
    "#9a6700",
    "#bf3989",
    "#57606a",
    "#d4a72c",
)

_WIDTH = 840.0
_HEIGHT = 640.0
_MARGIN = 40.0


def _f(value: float) -> str:
    return repr(float(value))


def _chains(task: Task, solution: Solution, maximize_straight: bool) -> list[list[Point2]]:
    if solution.completions is None:
        raise ValueError("solution not evaluated: completions are missing")
    return [
        completed_chain(task, row, solution.lengths, completion, target,
                        maximize_straight)
        for row, completion, target in zip(
            solution.angles, solution.completions, task.targets
        )
    ]


def render_scene(
    task: Task,
    solution: Optional[Solution] = None,
    maximize_straight: bool = False,
) -> str:
    """SVG 1.1 document: obstacles, targets with approach arrows, the home
    base, one polyline per configuration, and a legend with the link bounds."""
    chains = _chains(task, solution, maximize_straight) if solution else []
    xs = [task.home.position.x] + [t.position.x for t in task.targets]
    ys = [task.home.position.y] + [t.position.y for t in task.targets]
    for obs in task.obstacles:
        xs.extend((obs.center.x - obs.radius, obs.center.x + obs.radius))
        ys.extend((obs.center.y - obs.radius, obs.center.y + obs.radius))
    for chain in chains:
        xs.extend(p.x for p in chain)
        ys.extend(p.y for p in chain)
    min_x, max_x = min(xs), max(xs)
    min_y, max_y = min(ys), max(ys)
    span = max(max_x - min_x, max_y - min_y, 1e-9)
    scale = min(_WIDTH - 2.0 * _MARGIN, _HEIGHT - 2.0 * _MARGIN) / span
    tx = _MARGIN - min_x * scale
    ty = _HEIGHT - _MARGIN + min_y * scale
    mark = 8.0 / scale  # marker size: 8 px expressed in world units
    stroke = 1.5 / scale

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(_WIDTH)}" height="{_f(_HEIGHT)}" '
        f'viewBox="0 0 {_f(_WIDTH)} {_f(_HEIGHT)}">',
        f'<rect width="{_f(_WIDTH)}" height="{_f(_HEIGHT)}" fill="#ffffff"/>',
        f'<g transform="translate({_f(tx)},{_f(ty)}) scale({_f(scale)},{_f(-scale)})">',
    ]
    for obs in task.obstacles:
        parts.append(
            f'<circle cx="{_f(obs.center.x)}" cy="{_f(obs.center.y)}" '
            f'r="{_f(obs.radius)}" fill="#d0d7de" stroke="#57606a" '
            f'stroke-width="{_f(stroke)}"/>'
        )
    for i, chain in enumerate(chains):
        color = CHAIN_COLORS[i % len(CHAIN_COLORS)]
        points = " ".join(f"{_f(p.x)},{_f(p.y)}" for p in chain)
        parts.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" '
            f'stroke-width="{_f(2.5 / scale)}" stroke-linejoin="round"/>'
        )
        for p in chain[1:-1]:
            parts.append(
                f'<circle cx="{_f(p.x)}" cy="{_f(p.y)}" r="{_f(mark / 4.0)}" '
                f'fill="{color}"/>'
            )
    for t in task.targets:
        c, s = math.cos(t.orientation), math.sin(t.orientation)
        tipx, tipy = t.position.x, t.position.y
        tailx, taily = tipx - 2.5 * mark * c, tipy - 2.5 * mark * s
        leftx = tipx - mark * c + 0.5 * mark * -s
        lefty = tipy - mark * s + 0.5 * mark * c
        rightx = tipx - mark * c - 0.5 * mark * -s
        righty = tipy - mark * s - 0.5 * mark * c
        parts.append(
            f'<line x1="{_f(tailx)}" y1="{_f(taily)}" x2="{_f(tipx)}" '
            f'y2="{_f(tipy)}" stroke="#24292f" stroke-width="{_f(stroke)}"/>'
        )
        parts.append(
            f'<polygon points="{_f(tipx)},{_f(tipy)} {_f(leftx)},{_f(lefty)} '
            f'{_f(rightx)},{_f(righty)}" fill="#24292f"/>'
        )
        parts.append(
            f'<circle cx="{_f(tipx)}" cy="{_f(tipy)}" r="{_f(mark / 3.0)}" '
            f'fill="none" stroke="#24292f" stroke-width="{_f(stroke)}"/>'
        )
    hx, hy = task.home.position
    parts.append(
        f'<rect x="{_f(hx - mark / 2.0)}" y="{_f(hy - mark / 2.0)}" '
        f'width="{_f(mark)}" height="{_f(mark)}" fill="#24292f"/>'
    )
    parts.append(
        f'<line x1="{_f(hx)}" y1="{_f(hy)}" '
        f'x2="{_f(hx + 1.5 * mark * math.cos(task.home.orientation))}" '
        f'y2="{_f(hy + 1.5 * mark * math.sin(task.home.orientation))}" '
        f'stroke="#24292f" stroke-width="{_f(stroke)}"/>'
    )
    parts.append("</g>")

    unit = f" {task.unit}" if task.unit else ""
    llo, lhi = task.bounds.length_range
    legend = [
        f"links: up to {task.bounds.n_max}, "
        f"length {_f(llo)}..{_f(lhi)}{unit} each"
    ]
    for i in range(len(chains)):
        legend.append(f"target {i + 1}")
    y = 20.0
    parts.append(
        f'<text x="12" y="{_f(y)}" font-family="sans-serif" font-size="14" '
        f'fill="#24292f">{legend[0]}</text>'
    )
    for i, label in enumerate(legend[1:]):
        y += 18.0
        color = CHAIN_COLORS[i % len(CHAIN_COLORS)]
        parts.append(
            f'<line x1="12" y1="{_f(y - 4.0)}" x2="36" y2="{_f(y - 4.0)}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
        parts.append(
            f'<text x="42" y="{_f(y)}" font-family="sans-serif" '
            f'font-size="13" fill="#24292f">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
