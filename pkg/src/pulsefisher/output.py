"""CSV / metadata / gnuplot serialization of sweep grids, and the figure report."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from pulsefisher.bloch import EPS_PHYS
from pulsefisher.qfi import EPS_PURE
from pulsefisher.sweep import ASSUMPTIONS, Observable, SweepGrid

CSV_HEADER = ("x_name", "y_name", "x", "y", "observable", "value", "s_norm", "status")


def fmt(x: float) -> str:
    """Shortest decimal that round-trips to the same double."""
    return repr(float(x))


def csv_rows(grid: SweepGrid):
    xn = grid.plane.x.param.value
    yn = grid.plane.y.param.value
    xs = grid.x_nodes.tolist()
    ys = grid.y_nodes.tolist()
    for j, yv in enumerate(ys):
        for i, xv in enumerate(xs):
            good = bool(grid.ok[j, i])
            r = fmt(grid.s_norm[j, i])
            for obs in grid.observables:
                value = fmt(grid.values[obs][j, i]) if good else ""
                yield (xn, yn, fmt(xv), fmt(yv), obs.value, value, r, "ok" if good else "nonphysical")


def write_csv(grid: SweepGrid, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(csv_rows(grid))


def read_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def metadata(grid: SweepGrid, figure: str | None = None) -> dict:
    from pulsefisher import __version__

    plane = grid.plane
    return {
        "figure": figure,
        "mode": grid.mode.value,
        "time": plane.time,
        "log_base": grid.log_base,
        "x_axis": plane.x.to_dict(),
        "y_axis": plane.y.to_dict(),
        "fixed": dict(plane.fixed),
        "resolution": [plane.x.n, plane.y.n],
        "epsilon_pure": EPS_PURE,
        "epsilon_phys": EPS_PHYS,
        "tool_version": __version__,
        "assumptions": list(ASSUMPTIONS),
        "observables": [o.value for o in grid.observables],
        "cells": plane.x.n * plane.y.n,
        "nonphysical_cells": grid.nonphysical_count,
    }


def dump_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, allow_nan=False)
        fh.write("\n")


def meta_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + ".meta.json")


def write_grid(grid: SweepGrid, csv_path, figure: str | None = None) -> list[Path]:
    """Write CSV plus sidecar metadata; remove whatever was written on failure."""
    paths = [Path(csv_path), meta_path(csv_path)]
    try:
        write_csv(grid, paths[0])
        dump_json(metadata(grid, figure), paths[1])
    except BaseException:
        for p in paths:
            p.unlink(missing_ok=True)
        raise
    return paths


def gnuplot_script(grid: SweepGrid, csv_path, observable: Observable | None = None) -> str:
    obs = observable or grid.observables[0]
    csv_name = Path(csv_path).name
    xn, yn = grid.plane.x.param.value, grid.plane.y.param.value
    png = Path(csv_path).with_suffix("").name + f"_{obs.value}.png"
    return "\n".join([
        f"# {obs.value} over the ({xn}, {yn}) plane, mode={grid.mode.value}",
        "# non-physical cells are left blank",
        "set datafile separator ','",
        "set terminal pngcairo size 800,640",
        f"set output '{png}'",
        f"set xlabel '{xn}'",
        f"set ylabel '{yn}'",
        f"set xrange [{fmt(grid.plane.x.lo)}:{fmt(grid.plane.x.hi)}]",
        f"set yrange [{fmt(grid.plane.y.lo)}:{fmt(grid.plane.y.hi)}]",
        f"set cblabel '{obs.value}'",
        "set palette rgbformulae 33,13,10",
        "unset key",
        f"plot '{csv_name}' skip 1 using 3:4:(strcol(5) eq '{obs.value}' && strcol(8) eq 'ok' ? $6 : NaN) \\",
        "     with points pointtype 5 pointsize 0.4 palette",
        "",
    ])


def write_gnuplot(grid: SweepGrid, csv_path, script_path) -> None:
    with open(script_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(gnuplot_script(grid, csv_path))


# --- figure report ---------------------------------------------------------

FREEZE_TOL = 1e-10
NEAR_ZERO_FRACTION = 0.1
SMALL_OMEGA0 = 0.1


def _stats(values: np.ndarray, ok: np.ndarray) -> dict:
    good = values[ok]
    if good.size == 0:
        return {"min": None, "max": None}
    return {"min": float(good.min()), "max": float(good.max())}


def grid_summary(grid: SweepGrid) -> dict:
    out = {
        "cells": int(grid.ok.size),
        "nonphysical_cells": grid.nonphysical_count,
        "observables": {o.value: _stats(grid.values[o], grid.ok) for o in grid.observables},
    }
    if grid.mode.value == "exact":
        dev = {}
        theta = _axis_values(grid, "theta")
        for o in grid.observables:
            v = grid.values[o]
            if o is Observable.QFI_THETA:
                dev["max_abs_dev_qfi_theta_from_1"] = float(np.nanmax(np.abs(v - 1.0)))
            elif o is Observable.QFI_PHI:
                dev["max_abs_dev_qfi_phi_from_sin2_theta"] = float(np.nanmax(np.abs(v - np.sin(theta) ** 2)))
            elif o is Observable.I_COD:
                dev["max_abs_dev_i_cod_from_0"] = float(np.nanmax(np.abs(v)))
        out["freezing"] = dev
        out["freezing_confirmed"] = bool(all(d < FREEZE_TOL for d in dev.values()) and grid.nonphysical_count == 0)
    return out


def _axis_values(grid: SweepGrid, name: str) -> np.ndarray:
    """Value of parameter ``name`` at every cell, shape (ny, nx)."""
    plane = grid.plane
    ny, nx = grid.shape
    if plane.x.param.value == name:
        return np.broadcast_to(grid.x_nodes[None, :], (ny, nx))
    if plane.y.param.value == name:
        return np.broadcast_to(grid.y_nodes[:, None], (ny, nx))
    return np.full((ny, nx), plane.fixed[name])


def qualitative_fig1(grid: SweepGrid) -> dict:
    """F_theta "almost zero" for omega0 < 0.1, judged on physical cells only."""
    v = grid.values[Observable.QFI_THETA]
    om = _axis_values(grid, "omega0")
    region = grid.ok & (om < SMALL_OMEGA0)
    rule = (
        f"max F_theta over physical cells with omega0 < {SMALL_OMEGA0} is at most "
        f"{NEAR_ZERO_FRACTION} x the max over all physical cells"
    )
    if not region.any() or not grid.ok.any():
        return {"claim": "F_theta almost zero for omega0 < 0.1", "rule": rule,
                "result": "undetermined", "physical_cells_in_region": int(region.sum())}
    local = float(v[region].max())
    overall = float(v[grid.ok].max())
    observed = local <= NEAR_ZERO_FRACTION * overall
    return {
        "claim": "F_theta almost zero for omega0 < 0.1",
        "rule": rule,
        "result": "observed" if observed else "not observed",
        "physical_cells_in_region": int(region.sum()),
        "max_in_region": local,
        "max_overall": overall,
    }


def qualitative_fig2(grid: SweepGrid) -> dict:
    """I_cod maximal at small omega0."""
    v = grid.values[Observable.I_COD]
    om = _axis_values(grid, "omega0")
    rule = f"omega0 at the maximum of I_cod over physical cells is below {SMALL_OMEGA0}"
    if not grid.ok.any():
        return {"claim": "I_cod maximum at small omega0", "rule": rule, "result": "undetermined",
                "physical_cells": 0}
    masked = np.where(grid.ok, v, -np.inf)
    j, i = np.unravel_index(int(np.argmax(masked)), masked.shape)
    at = float(om[j, i])
    return {
        "claim": "I_cod maximum at small omega0",
        "rule": rule,
        "result": "observed" if at < SMALL_OMEGA0 else "not observed",
        "physical_cells": int(grid.ok.sum()),
        "max_value": float(v[j, i]),
        "omega0_at_max": at,
    }


def build_report(grids: dict, resolution: int, time: float, log_base: float) -> dict:
    """``grids`` maps (figure, mode) to SweepGrid."""
    from pulsefisher import __version__

    figures: dict = {}
    for (fig, mode), grid in grids.items():
        figures.setdefault(fig, {})[mode] = grid_summary(grid)
    exact = [g for (_, m), g in grids.items() if m == "exact"]
    report = {
        "tool_version": __version__,
        "resolution": resolution,
        "time": time,
        "log_base": log_base,
        "freeze_tolerance": FREEZE_TOL,
        "figures": figures,
    }
    if exact:
        report["exact_freezing_confirmed"] = all(grid_summary(g)["freezing_confirmed"] for g in exact)
    qual = {}
    if ("fig1", "paper") in grids:
        qual["fig1"] = qualitative_fig1(grids[("fig1", "paper")])
    if ("fig2", "paper") in grids:
        qual["fig2"] = qualitative_fig2(grids[("fig2", "paper")])
    if qual:
        report["qualitative_paper_mode"] = qual
    return report
