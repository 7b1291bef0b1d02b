"""Command-line front end.

Every command reads UTF-8 JSON (model files) and prints a JSON report to
stdout.  Exit codes: 0 success, 1 verification failure, 2 input error.
Output is deterministic for fixed inputs and seed: containers are built in
canonical term order.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import berry, weyl
from .exprparse import ExprError, parse_theta
from .latexout import param_poly_latex, poly_latex, series_latex
from .metric import (
    certify_metric,
    expand_gaussian_in_coupling,
    gaussian_branch_identities,
    gaussian_exponent,
    log_linear_in_n_check,
    metric_residual,
    number_observable,
    observable_residual,
    pde_operator,
    solve_perturbative,
)
from .modelio import Model, ModelError, load_model
from .phasepoly import CouplingSeries, PhasePoly
from .scalars import ParamPoly, PoleAtPoint
from .star import ExpQuadForm, dagger, is_hermitian, star, star_log, star_poly_expquad


class CliInputError(ValueError):
    pass


def _require(condition, message):
    if not condition:
        raise CliInputError(message)


def _model(args) -> Model:
    _require(args.model, "this command needs --model PATH")
    return load_model(args.model)


def _maybe_hbar(model: Model, value):
    return value if model.hbar is None else value.subs_hbar(model.hbar)


def _order(args, model: Model, default=3) -> int:
    if getattr(args, "order", None) is not None:
        return args.order
    if model.order is not None:
        return model.order
    return default


# ---------------------------------------------------------------------------
# command handlers: each returns (payload, verified)


def cmd_star(args):
    model = _model(args)
    _require(args.theta, "star needs --theta SPEC")
    kind, theta = parse_theta(args.theta)
    h = model.spec.symbolic_total()
    if kind == "poly":
        left, right = star(h, theta), star(theta, dagger(h))
        payload = {
            "h_star_theta": _maybe_hbar(model, left).to_json(),
            "theta_star_hdagger": _maybe_hbar(model, right).to_json(),
        }
    elif kind == "expquad":
        left = star_poly_expquad(h, theta, "left")
        right = star_poly_expquad(dagger(h), theta, "right")
        payload = {
            "h_star_theta": _maybe_hbar(model, left).to_json(),
            "theta_star_hdagger": _maybe_hbar(model, right).to_json(),
        }
    else:
        raise CliInputError("star supports polynomial and expquad candidates")
    return payload, True


def cmd_dagger(args):
    model = _model(args)
    result = _maybe_hbar(model, dagger(model.spec.symbolic_total()))
    payload = {"dagger": result.to_json()}
    if args.latex:
        payload["latex"] = poly_latex(result)
    return payload, True


def cmd_check_hermitian(args):
    model = _model(args)
    h = model.spec.symbolic_total()
    if model.hbar is not None:
        h = h.subs_hbar(model.hbar)
    result = is_hermitian(h)
    return {"model": model.name, "hermitian": result}, result


def cmd_pde(args):
    model = _model(args)
    op = pde_operator(model.spec)
    if model.hbar is not None:
        op = op.subs_hbar(model.hbar)
    payload = {"model": model.name, "coefficients": op.normalized().to_json()}
    return payload, True


def cmd_residual(args):
    model = _model(args)
    _require(args.theta, "residual needs --theta SPEC")
    kind, theta = parse_theta(args.theta)
    res = metric_residual(model.spec, theta)
    payload = {"model": model.name, "theta_kind": kind}
    if kind == "series":
        payload["order"] = theta.order
        res = res if model.hbar is None else res.subs_hbar(model.hbar)
        zero = res.is_zero
    elif kind == "expquad":
        pref = _maybe_hbar(model, res).prefactor
        zero = pref.is_zero
    else:
        zero = _maybe_hbar(model, res).is_zero
    payload["residual_zero"] = zero
    return payload, zero


def _solved_series(args, model: Model) -> CouplingSeries:
    _require(model.spec.has_coupling, f"model {model.name!r} has no coupling to expand in")
    order = _order(args, model)
    return solve_perturbative(
        model.spec.h0, model.spec.v, order, coupling=model.spec.coupling_name
    )


def cmd_solve(args):
    model = _model(args)
    theta = _solved_series(args, model)
    residual_zero = metric_residual(model.spec, theta).is_zero
    payload = {"model": model.name, "series": theta.to_json(), "residual_zero": residual_zero}
    if args.latex:
        payload["latex"] = series_latex(theta)
    return payload, residual_zero


def cmd_starlog(args):
    model = None
    if args.series:
        with open(args.series, encoding="utf-8") as fh:
            theta = CouplingSeries.from_json(json.load(fh))
        payload = {"source": args.series}
    else:
        model = _model(args)
        theta = _solved_series(args, model)
        payload = {"model": model.name}
    log = star_log(theta)
    payload["log"] = log.to_json()
    if args.latex:
        payload["latex"] = series_latex(log)
    return payload, True


def _certify_payload(path: str, order, latex: bool = False) -> dict:
    model = load_model(path)
    theta = solve_perturbative(
        model.spec.h0,
        model.spec.v,
        order if order is not None else (model.order if model.order is not None else 3),
        coupling=model.spec.coupling_name,
    )
    report = certify_metric(theta)
    residual_zero = metric_residual(model.spec, theta).is_zero
    out = {"model": model.name}
    out.update(report.to_json())
    out["residual_zero"] = residual_zero
    if latex:
        out["latex"] = series_latex(theta)
    return out


def cmd_certify(args):
    _require(args.model, "certify needs at least one --model PATH")
    paths = args.model if isinstance(args.model, list) else [args.model]
    for path in paths:
        if load_model(path).spec.coupling_name is None:
            raise CliInputError(f"model {path!r} has no coupling; certify works on series metrics")
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(
                pool.map(
                    _certify_payload, paths, [args.order] * len(paths), [args.latex] * len(paths)
                )
            )
    else:
        reports = [_certify_payload(path, args.order, args.latex) for path in paths]
    ok = all(r["hermitian"] and r["positive"] and r["residual_zero"] for r in reports)
    payload = {"reports": reports} if len(reports) > 1 else reports[0]
    return payload, ok


def _quadratic_generators(model: Model):
    coeffs = list(model.spec.h0.terms.values())
    _require(
        coeffs and all(isinstance(c, ParamPoly) and c.params == ("a", "b", "c") for c in coeffs),
        "family analysis needs the quadratic model with symbolic parameters a, b, c",
    )
    return ParamPoly.generators("a", "b", "c")


def cmd_family(args):
    model = _model(args)
    _require(args.observable, "family needs --observable {p|x|N}")
    a, b, c = _quadratic_generators(model)
    spec = model.spec
    x_poly, p_poly = PhasePoly.x(), PhasePoly.p()
    if args.observable == "p":
        r = PhasePoly.monomial(c / (b * 2), 0, 0, -1).scaled(-1)
        zero = PhasePoly.zero()
        e = ExpQuadForm.pure_exponent(gaussian_exponent(r, zero, zero))
        ids = gaussian_branch_identities(a, b, c, r, zero, zero)
        payload = {
            "observable": "p",
            "exponent": "r p^2 with r = -c/(2 b hbar)",
            "metric_residual_zero": metric_residual(spec, e).prefactor.is_zero,
            "observable_residual_zero": observable_residual(p_poly, e).prefactor.is_zero,
            "branch_identities_zero": all(i.is_zero for i in ids),
        }
        ok = all(payload[k] for k in payload if k.endswith("zero"))
        return payload, ok
    if args.observable == "x":
        t = PhasePoly.monomial(c / (a * 2), 0, 0, -1)
        t_printed = PhasePoly.monomial(c / (b * 2), 0, 0, -1)
        zero = PhasePoly.zero()
        e = ExpQuadForm.pure_exponent(gaussian_exponent(zero, zero, t))
        e_printed = ExpQuadForm.pure_exponent(gaussian_exponent(zero, zero, t_printed))
        ids = gaussian_branch_identities(a, b, c, zero, zero, t)
        payload = {
            "observable": "x",
            "exponent": "t x^2 with t = c/(2 a hbar)",
            "metric_residual_zero": metric_residual(spec, e).prefactor.is_zero,
            "observable_residual_zero": observable_residual(x_poly, e).prefactor.is_zero,
            "branch_identities_zero": all(i.is_zero for i in ids),
            "alternative_t_c_over_2b_residual_zero": metric_residual(
                spec, e_printed
            ).prefactor.is_zero,
        }
        ok = (
            payload["metric_residual_zero"]
            and payload["observable_residual_zero"]
            and payload["branch_identities_zero"]
        )
        return payload, ok
    if args.observable == "N":
        _require(
            set(model.numeric) >= {"a", "b"},
            "the N-observable expansion needs numeric rationals for a and b in options.numeric",
        )
        order = _order(args, model)
        av, bv = model.numeric["a"], model.numeric["b"]
        theta = expand_gaussian_in_coupling(av, bv, order)
        report = certify_metric(theta)
        n_obs = number_observable()
        spec_num = _numeric_quadratic_spec(av, bv)
        payload = {
            "observable": "N",
            "a": str(av),
            "b": str(bv),
            "order": order,
            "hermitian": report.hermitian,
            "positive": report.positive,
            "metric_residual_zero": metric_residual(spec_num, theta).is_zero,
            "observable_residual_zero": observable_residual(n_obs, theta).is_zero,
            "log_linear_in_N": log_linear_in_n_check(av, bv, order),
        }
        ok = all(v is not False for v in payload.values())
        return payload, ok
    raise CliInputError(f"unknown observable {args.observable!r}")


def _numeric_quadratic_spec(av: Fraction, bv: Fraction):
    from .metric import HamiltonianSpec
    from .scalars import GaussianRational, I

    h0 = PhasePoly.monomial(GaussianRational(av), 0, 2, 0) + PhasePoly.monomial(
        GaussianRational(bv), 2, 0, 0
    )
    return HamiltonianSpec(h0, ("c", PhasePoly.monomial(I, 1, 1, 0)))


def cmd_berry2x2(args):
    rng = np.random.default_rng(args.seed)
    f = berry.holonomy_exceptional()
    f_expected = np.array([[-1.0, -2j], [0.0, 1.0]])
    monodromy_err = float(np.max(np.abs(f - f_expected)))
    up, um = berry.coalescing_eigenvectors(0.05 * np.exp(0.7j))
    swap_err = float(
        max(np.max(np.abs(f @ up - um)), np.max(np.abs(f @ um - up)))
    )
    product_err = float(np.max(np.abs(berry.holonomy_product_form(100000) - f_expected)))
    worst_solve = 0.0
    worst_residual = 0.0
    trials = args.trials
    done = 0
    while done < trials:
        q = rng.uniform(-1.5, 1.5, size=2)
        z = q[0] + 1j * q[1]
        if abs(1 + z * z) < 0.1:
            continue
        done += 1
        a_solved = berry.solve_connection_2x2(q)
        a_ref = berry.gauge_fixed_connection(q)
        worst_solve = max(
            worst_solve, max(float(np.max(np.abs(s - r))) for s, r in zip(a_solved, a_ref))
        )
        worst_residual = max(
            worst_residual,
            berry.verify_connection_matrix(
                berry.model_hamiltonian(q), berry.model_partials(q), a_solved
            ),
        )
    rank_deficient = []
    for point in ((0.0, 1.0), (0.0, -1.0)):
        try:
            berry.solve_connection_2x2(point)
        except berry.RankDeficient:
            rank_deficient.append(list(point))
    curvature_norm = float(
        np.max(np.abs(berry.curvature_of_field(berry.gauge_fixed_connection, (0.5, 1.0 / 3.0))))
    )
    payload = {
        "monodromy": [[_cstr(v) for v in row] for row in f],
        "monodromy_error": monodromy_err,
        "eigenvector_swap_error": swap_err,
        "product_form_error": product_err,
        "trials": trials,
        "max_connection_mismatch": worst_solve,
        "max_equation_residual": worst_residual,
        "rank_deficient_at": rank_deficient,
        "curvature_norm_at_sample": curvature_norm,
    }
    ok = (
        monodromy_err <= 1e-12
        and swap_err <= 1e-12
        and product_err <= 1e-4
        and worst_solve <= 1e-10
        and worst_residual <= 1e-10
        and len(rank_deficient) == 2
        and curvature_norm <= 1e-8
    )
    return payload, ok


def _cstr(v: complex) -> str:
    return f"{v.real:+.12g}{v.imag:+.12g}j"


def cmd_berry_osc(args):
    conn = berry.moyal_connection_solve()
    res1, res2 = berry.connection_residual(conn)
    curvature = berry.moyal_curvature(conn)
    locus = berry.singular_locus(conn)
    payload = {
        "connection": conn.to_json(),
        "residuals_zero": res1.is_zero and res2.is_zero,
        "curvature_zero": curvature.is_zero,
        "locus": locus.to_json(),
        "locus_latex": param_poly_latex(locus),
    }
    if args.q1 is not None and args.q2 is not None:
        q1, q2 = Fraction(args.q1), Fraction(args.q2)
        value = berry.locus_value(q1, q2)
        point = {"q1": str(q1), "q2": str(q2), "locus_value": str(value)}
        if value == 0:
            point["on_locus"] = True
        else:
            evals = {}
            for name, coeff in (
                ("a1_xp", conn.s1),
                ("a1_xx", conn.t1),
                ("a2_xp", conn.s2),
                ("a2_xx", conn.t2),
            ):
                evals[name] = repr(coeff.eval(q1, q2))
            point["coefficients"] = evals
        payload["point"] = point
    ok = payload["residuals_zero"] and payload["curvature_zero"]
    return payload, ok


def _parse_range(spec: str):
    if ":" in spec:
        lo, hi, count = spec.split(":")
        lo, hi, count = Fraction(lo), Fraction(hi), int(count)
        if count < 2:
            return [lo]
        step = (hi - lo) / (count - 1)
        return [lo + k * step for k in range(count)]
    return [Fraction(spec)]


def _scan_record(q1: Fraction, q2: Fraction) -> dict:
    value = berry.locus_value(q1, q2)
    sign = 0 if value == 0 else (1 if value > 0 else -1)
    return {
        "q1": float(q1),
        "q2": float(q2),
        "locus_value": float(value),
        "region_sign": sign,
    }


def _scan_chunk(points):
    return [_scan_record(q1, q2) for q1, q2 in points]


def cmd_scan_locus(args):
    if args.omega is not None:
        _require(
            args.alpha is not None and args.beta is not None,
            "oscillator mapping needs --omega, --alpha and --beta",
        )
        q1, q2 = berry.oscillator_parameters(args.omega, args.alpha, args.beta)
        record = _scan_record(q1, q2)
        record["omega"], record["alpha"], record["beta"] = args.omega, args.alpha, args.beta
        record["distance_origin_to_locus"] = berry.locus_distance_from_origin(args.omega)
        return {"records": [record]}, True
    q1s = _parse_range(args.q1 or "-3:3:25")
    q2s = _parse_range(args.q2 or "-3:3:25")
    points = [(q1, q2) for q1 in q1s for q2 in q2s]
    if args.jobs > 1:
        chunks = [points[i :: args.jobs] for i in range(args.jobs)]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            parts = list(pool.map(_scan_chunk, chunks))
        records = [rec for part in parts for rec in part]
        records.sort(key=lambda r: (r["q1"], r["q2"]))
    else:
        records = _scan_chunk(points)
    return {"count": len(records), "records": records}, True


def cmd_finite_oracle(args):
    report = weyl.oracle_run(args.n, args.trials, args.seed)
    return report, report["failures"] == 0


def cmd_emit_latex(args):
    model = _model(args)
    h = model.spec.symbolic_total()
    if model.hbar is not None:
        h = h.subs_hbar(model.hbar)
    payload = {"model": model.name, "hamiltonian": poly_latex(h)}
    if model.spec.has_coupling and (args.order is not None or model.order is not None):
        theta = _solved_series(args, model)
        payload["metric_series"] = series_latex(theta)
        payload["metric_log"] = series_latex(star_log(theta))
    return payload, True


_HANDLERS = {
    "star": cmd_star,
    "dagger": cmd_dagger,
    "check-hermitian": cmd_check_hermitian,
    "pde": cmd_pde,
    "residual": cmd_residual,
    "solve": cmd_solve,
    "starlog": cmd_starlog,
    "certify": cmd_certify,
    "family": cmd_family,
    "berry2x2": cmd_berry2x2,
    "berry-osc": cmd_berry_osc,
    "scan-locus": cmd_scan_locus,
    "finite-oracle": cmd_finite_oracle,
    "emit-latex": cmd_emit_latex,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starmetric",
        description="Exact star-product calculus for metric operators and Berry connections",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)
    for name in _HANDLERS:
        p = sub.add_parser(name)
        if name == "certify":
            p.add_argument("--model", action="append")
        else:
            p.add_argument("--model")
        p.add_argument("--order", type=int)
        p.add_argument("--observable", choices=["p", "x", "N"])
        p.add_argument("--theta")
        p.add_argument("--series")
        p.add_argument("--q1")
        p.add_argument("--q2")
        p.add_argument("--omega", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--n", type=int, default=4)
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--seed", type=int, default=7)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--latex", action="store_true")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        payload, ok = _HANDLERS[args.cmd](args)
    except json.JSONDecodeError as exc:
        msg = f"malformed JSON: line {exc.lineno} column {exc.colno}: {exc.msg}"
        print(json.dumps({"error": msg}), file=sys.stderr)
        return 2
    except (CliInputError, ModelError, ExprError, PoleAtPoint, OSError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 2
    print(json.dumps(payload, indent=2))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
