"""Named parameter bundles for the standard curve families, emitted as data files.

The time ranges are defaults, not part of the physics; override them
with ``--tmax`` / ``--points``.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class FigurePreset:
    id: str
    measure: str          # "concurrence" or "negativity"
    d: int
    axis: str             # swept parameter: lambda, g, L or P
    values: tuple
    base: dict = field(default_factory=dict)
    state: str = "pure"
    tmax: float = 20.0
    points: int = 500
    description: str = ""


_QUBIT = {"L": 300, "g": 0.1}

PRESETS = {
    p.id: p
    for p in [
        FigurePreset("fig1a", "concurrence", 2, "lambda", (0.5, 1.0, 1.5, 2.0), dict(_QUBIT),
                     description="concurrence vs t at and below the critical field"),
        FigurePreset("fig1b", "concurrence", 2, "lambda", (3.0, 4.0, 5.0), dict(_QUBIT),
                     tmax=10.0, points=1000, description="concurrence vs t above the critical field"),
        FigurePreset("fig2", "concurrence", 2, "L", (200, 600, 1000), {"lambda": 4.0, "g": 0.1},
                     description="environment-size dependence at lambda = 4"),
        FigurePreset("fig3", "concurrence", 2, "g", (0.1, 1.0, 25.0, 100.0), {"L": 300, "lambda": 2.0},
                     description="coupling dependence at the critical field"),
        FigurePreset("fig4", "concurrence", 2, "P", (0.5, 0.7, 1.0), {"L": 300, "lambda": 2.0, "g": 0.1},
                     state="werner", description="Werner-state sudden death at the critical field"),
        FigurePreset("fig5a", "negativity", 3, "lambda", (0.1, 1.0, 2.0), dict(_QUBIT),
                     description="qutrit negativity at and below the critical field"),
        FigurePreset("fig5b", "negativity", 3, "lambda", (3.0, 4.0, 5.0), dict(_QUBIT),
                     tmax=10.0, points=1000, description="qutrit negativity above the critical field"),
        FigurePreset("fig6", "negativity", 3, "g", (0.1, 1.0, 15.0, 100.0), {"L": 300, "lambda": 2.0},
                     description="qutrit coupling dependence at the critical field"),
    ]
}
