"""Command-line front end that turns scenario files into figure datasets.

Exit codes: 0 success, 2 configuration error, 3 model error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys as _sys
from pathlib import Path

import numpy as np

from . import io
from .cavity import cavity_transmission, enhancement_report
from .config import Scenario, load_scenario
from .eit import fwhm, scan_spectrum, transmittance
from .errors import ConfigurationError, ModelError
from .estimation import (
    fisher_map,
    fi_stark_shift,
    max_slope_detuning,
    optimal_operating_point,
    tradeoff_sweep,
)
from .readout import (
    de_min_scan,
    demodulate,
    dc_retrieve_biased,
    fi_dc_biased,
    min_detectable_field,
    sense_timeseries,
    synthesize_field,
)
from .sigproc import dft, peak_pick, spectral_floor
from .stark import stark_shift


def _grid(lo, hi, n) -> np.ndarray:
    n = int(n)
    if n < 2 or not hi > lo:
        raise ConfigurationError(f"invalid grid [{lo}, {hi}] with {n} points")
    return np.linspace(lo, hi, n)


def cmd_spectrum(sc: Scenario, out: Path, points: int | None) -> dict:
    s = sc.spectrum
    n = points or s.points
    if not s.e_fields_v_per_cm:
        raise ConfigurationError("[spectrum].e_fields_v_per_cm is empty")
    x = _grid(s.delta_c_min, s.delta_c_max, n)
    med = sc.med if s.observable == "transmittance" else None
    e_col, x_col, y_col, rows = [], [], [], []
    for e in s.e_fields_v_per_cm:
        shift = float(stark_shift(sc.state, e))
        grid = scan_spectrum(sc.sys, med, (s.delta_c_min - shift, s.delta_c_max - shift), n, s.observable)
        y = grid.values
        e_col.append(np.full(n, e))
        x_col.append(x)
        y_col.append(y)
        peak = x[int(np.argmax(y))] if s.observable == "transmittance" else x[int(np.argmin(y))]
        rows.append({"e_field_v_per_cm": e, "stark_shift_mhz": shift, "line_centre_mhz": peak})
    io.write_csv(out / "spectrum.csv", ["e_field_v_per_cm", "delta_c_mhz", "value"],
                 [np.concatenate(e_col), np.concatenate(x_col), np.concatenate(y_col)])
    summary = {"observable": s.observable, "curves": rows}
    if s.observable == "transmittance":
        summary["fwhm_mhz"] = fwhm(scan_spectrum(sc.sys, sc.med, (s.delta_c_min, s.delta_c_max), n))
    return summary


def cmd_fisher(sc: Scenario, out: Path, points: int | None) -> dict:
    f = sc.fisher
    dc_axis = _grid(f.delta_c_min, f.delta_c_max, points or f.points)
    oc_axis = _grid(f.omega_c_min, f.omega_c_max, f.omega_c_points)
    fmap = fisher_map(sc.sys, sc.med, sc.budget, dc_axis, oc_axis)
    oo, dd = np.meshgrid(oc_axis, dc_axis, indexing="ij")
    io.write_csv(out / "fi_map.csv", ["omega_c_mhz", "delta_c_mhz", "fi_mhz-2"], [oo, dd, fmap.fi])

    fi_slice = fi_stark_shift(sc.sys, sc.med, sc.budget, dc_axis)
    io.write_csv(out / "fi_slice.csv", ["delta_c_mhz", "fi_mhz-2"], [dc_axis, fi_slice])
    with np.errstate(divide="ignore"):
        dds = np.where(fi_slice > 0, 1.0 / np.sqrt(fi_slice), np.inf)
    io.write_csv(out / "crlb_slice.csv", ["delta_c_mhz", "sqrt_crlb_mhz_per_sqrthz"], [dc_axis, dds])

    rows = tradeoff_sweep(sc.sys, sc.med, sc.budget, oc_axis, f.tolerance)
    io.write_csv(out / "tradeoff.csv", ["omega_c_mhz", "delta_opt_mhz", "fi_max_mhz-2", "r_ds_mhz"],
                 list(zip(*rows)))

    op = optimal_operating_point(sc.sys, sc.med, sc.budget, search_range=(1e-3, f.dds_window))
    return {
        "delta_opt_mhz": op.delta,
        "fi_max_mhz-2": op.fi_at_delta,
        "min_dds_mhz_sqrthz": 1.0 / np.sqrt(op.fi_at_delta),
        "min_dds_hz_sqrthz": 1e6 / np.sqrt(op.fi_at_delta),
        "max_slope_detuning_mhz": max_slope_detuning(sc.sys),
        "max_slope_detuning_lindblad_mhz": max_slope_detuning(sc.sys, model="lindblad"),
        "f_max_decreasing": bool(np.all(np.diff([r.f_max for r in rows]) < 0)),
        "r_ds_increasing": bool(np.all(np.diff([r.r_ds for r in rows]) > 0)),
    }


def cmd_dc(sc: Scenario, out: Path, points: int | None) -> dict:
    cfg, d = sc.sensor, sc.dc
    if cfg.e_bias == 0:
        raise ConfigurationError("[sensor].e_bias must be non-zero for the dc command")
    if not 0 < d.e_min < d.e_max or d.e_points < 2:
        raise ConfigurationError("[dc] needs 0 < e_min < e_max and e_points >= 2")
    e_true = np.logspace(np.log10(d.e_min), np.log10(d.e_max), int(d.e_points))
    _, e_hat = dc_retrieve_biased(cfg, e_true)
    rel = np.abs(e_hat - e_true) / e_true
    io.write_csv(out / "dc_retrieval.csv", ["e_true_v_per_m", "e_hat_v_per_m", "rel_error"], [e_true, e_hat, rel])

    dc_axis = _grid(d.delta_c_min, d.delta_c_max, points or d.points)
    de = de_min_scan(cfg, dc_axis)
    io.write_csv(out / "de_min.csv", ["delta_c_mhz", "de_min_v_per_m_sqrthz"], [dc_axis, de])
    i = int(np.argmin(de))
    return {
        "max_rel_error": float(rel.max()),
        "de_min_at_delta_v_per_m_sqrthz": min_detectable_field(cfg),
        "fi_dc_at_delta_v_per_m-2": fi_dc_biased(cfg),
        "de_min_scan_min": float(de[i]),
        "de_min_scan_argmin_mhz": float(dc_axis[i]),
    }


def _top_peaks(spec, n):
    return [{"f_hz": f, "magnitude": m} for f, m in peak_pick(spec, spec.resolution / 2, spec.freqs[-1], n)]


def cmd_ac(sc: Scenario, out: Path, seed: int | None) -> dict:
    a, fs, noise = sc.ac, sc.field_spec, sc.noise
    if seed is not None:
        noise = dataclasses.replace(noise, seed=seed)
    cfg = sc.sensor
    if cfg.e_bias == 0:
        raise ConfigurationError("[sensor].e_bias must be non-zero for the ac command")
    unbiased_cfg = dataclasses.replace(cfg, e_bias=0.0)

    e_unb = synthesize_field(fs, a.duration, a.sample_rate, 0.0)
    rho_a, _, _ = sense_timeseries(unbiased_cfg, e_unb, noise)
    spec_unb = dft(rho_a)
    e_b = synthesize_field(fs, a.duration, a.sample_rate, cfg.e_bias)
    _, _, rho_ab = sense_timeseries(cfg, e_b, noise)
    a_hat, spec_b = demodulate(rho_ab, fs.f_ac, cfg)

    io.write_timeseries_csv(out / "unbiased_timeseries.csv", rho_a)
    io.write_spectrum_csv(out / "unbiased_spectrum.csv", spec_unb)
    io.write_timeseries_csv(out / "biased_timeseries.csv", rho_ab)
    io.write_spectrum_csv(out / "biased_spectrum.csv", spec_b)

    floor_b, floor_u = spectral_floor(spec_b), spectral_floor(spec_unb)
    line_u = float(spec_unb.magnitudes[spec_unb.bin_of(fs.f_ac)])
    peaks_b = _top_peaks(spec_b, a.n_peaks)
    return {
        "seed": noise.seed,
        "a_true_v_per_m": fs.a,
        "a_hat_v_per_m": a_hat,
        "biased_top_peaks": peaks_b,
        "biased_floor": floor_b,
        "biased_top_over_floor": peaks_b[0]["magnitude"] / floor_b,
        "unbiased_top_peaks": _top_peaks(spec_unb, a.n_peaks),
        "unbiased_floor": floor_u,
        "unbiased_fac_line": line_u,
        "unbiased_fac_above_threshold": bool(line_u > a.floor_factor * floor_u),
    }


def cmd_cavity(sc: Scenario, out: Path, points: int | None) -> dict:
    c = sc.cavity_scan
    n_cav = points or c.points
    x_free = _grid(c.free_min, c.free_max, c.free_points)
    x_cav = _grid(c.cavity_min, c.cavity_max, n_cav)
    io.write_csv(out / "free_scan.csv", ["delta_c_mhz", "transmission"], [x_free, transmittance(sc.sys, sc.med, x_free)])
    io.write_csv(out / "cavity_scan.csv", ["delta_c_mhz", "transmission"],
                 [x_cav, cavity_transmission(sc.cavity, sc.sys, sc.med, x_cav)])
    rep = enhancement_report(sc.cavity, sc.sys, sc.med, sc.budget, sc.state, sc.sensor.e_bias,
                             cavity_scan=((c.cavity_min, c.cavity_max), n_cav),
                             free_scan=((c.free_min, c.free_max), c.free_points))
    payload = rep.to_dict()
    io.write_json(out / "enhancement.json", payload)
    return payload


COMMANDS = {
    "spectrum": (cmd_spectrum, "summary.json"),
    "fisher": (cmd_fisher, "summary.json"),
    "dc": (cmd_dc, "summary.json"),
    "ac": (cmd_ac, "ac_summary.json"),
    "cavity": (cmd_cavity, None),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rydsense", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", required=True, type=Path)
        s.add_argument("--out", type=Path, default=None, help="output directory (overrides [output].dir)")
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--points", type=int, default=None, help="override the main scan resolution")
    return p


def _print_summary(d: dict, prefix: str = "") -> None:
    for k, v in d.items():
        if isinstance(v, dict):
            _print_summary(v, f"{prefix}{k}.")
        elif isinstance(v, list):
            print(f"{prefix}{k}: {len(v)} entries")
        else:
            print(f"{prefix}{k}: {v}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn, summary_name = COMMANDS[args.command]
    try:
        if args.points is not None and args.points < 2:
            raise ConfigurationError("--points must be >= 2")
        sc = load_scenario(args.config)
        out = args.out if args.out is not None else Path(sc.output.dir)
        out.mkdir(parents=True, exist_ok=True)
        extra = args.seed if args.command == "ac" else args.points
        summary = fn(sc, out, extra)
        if summary_name:
            io.write_json(out / summary_name, summary)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=_sys.stderr)
        return 2
    except ModelError as exc:
        print(f"model error: {exc}", file=_sys.stderr)
        return 3
    _print_summary(summary)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
