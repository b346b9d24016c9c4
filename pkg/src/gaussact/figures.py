"""Canonical sweeps behind the capacity-landscape figures."""

from __future__ import annotations

from .sweep import Axis, SweepSpec

FIG2_GAINS = (1.5, 1.8, 2.5)
FIG2_GPP = 2.0
FIG2C_G = 1.8
FIG3A_CG = 0.1

LINE_POINTS = 500
PLANE_POINTS = 201
CUBE_POINTS = (19, 41, 41)

GP_LINE = (1.0, 30.0)
GP_PLANE = (1.0, 20.0)
GPP_FIG2C = (1.0, 3.5)
GPP_FIG3 = (1.0, 5.0)
CG_CUBE = (0.05, 0.95)

FIGURES = ("fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b")


def figure_spec(which: str, points: int | None = None) -> SweepSpec:
    """Sweep for one figure panel.

    ``points`` overrides the per-axis density (all axes of the panel).
    """
    line = points or LINE_POINTS
    plane = points or PLANE_POINTS
    if which in ("fig2a", "fig2b", "fig2d"):
        quantity = {"fig2a": "qlb", "fig2b": "n_e", "fig2d": "qlb_amp"}[which]
        axes = (Axis("G", values=FIG2_GAINS), Axis("Gp", *GP_LINE, line))
        fixed = {} if which == "fig2d" else {"Gpp": FIG2_GPP}
        return SweepSpec(axes, fixed, (quantity,))
    if which == "fig2c":
        return SweepSpec(
            (Axis("Gpp", *GPP_FIG2C, plane), Axis("Gp", *GP_PLANE, plane)),
            {"G": FIG2C_G},
            ("tau", "n_e", "qlb", "class_label"),
        )
    if which == "fig3a":
        return SweepSpec(
            (Axis("Gpp", *GPP_FIG3, plane), Axis("Gp", *GP_PLANE, plane)),
            {"Cg": FIG3A_CG},
            ("tau", "n_e", "qlb"),
        )
    if which == "fig3b":
        n_cg, n_gpp, n_gp = (points,) * 3 if points else CUBE_POINTS
        return SweepSpec(
            (
                Axis("Cg", *CG_CUBE, n_cg),
                Axis("Gpp", *GPP_FIG3, n_gpp),
                Axis("Gp", *GP_PLANE, n_gp),
            ),
            {},
            ("qlb",),
        )
    raise ValueError(f"unknown figure {which!r}; expected one of {FIGURES}")
