"""Command-line front end: `carpet SUBCOMMAND ...`.

Every subcommand prints (or writes) one JSON report.  Exit status is 0 when
all checks in the report pass, 1 when one fails and 2 on usage errors.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click


def _apply_thread_cap() -> None:
    cap = os.environ.get("CARPET_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)


_apply_thread_cap()

from . import chamanara, entropy, hyperlocal, plot, quotient, toral, verify  # noqa: E402
from . import invlim as il  # noqa: E402
from .symbolic import ProbabilityVector  # noqa: E402


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=1, sort_keys=True, default=str) + "\n"
    if out:
        plot.write_atomic(out, text)
    else:
        click.echo(text, nl=False)
    if report.get("passed") is False:
        sys.exit(1)


def _fraction(ctx, param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(str(exc)) from exc


out_option = click.option("--out", type=click.Path(dir_okay=False), help="Write the JSON report here instead of stdout.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Exact computations on baker maps, Chamanara surfaces and their sphere quotients."""


@main.command("chamanara")
@click.option("--base", "-n", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--check-semiconj", is_flag=True, help="Exhaustive P o shift = B o P sweep.")
@click.option("--period-max", type=click.IntRange(min=2), default=8, show_default=True,
              help="Largest preperiod+period length per side pair in the sweep.")
@click.option("--point", help="A point 'x,y' (fractions or digit expansions like 0.1(01)_2).")
@click.option("--steps", type=click.IntRange(min=0), default=5, show_default=True)
@click.option("--density", "density_eps", callback=_fraction, help="Find a periodic point within this distance of --point.")
@out_option
def chamanara_cmd(base, check_semiconj, period_max, point, steps, density_eps, out):
    """Canonical classes, the n-baker map and its symbolic factor."""
    report: dict = {"base": base}
    ok = True
    if point:
        try:
            z = chamanara.parse_point(point, base)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--point") from exc
        report["point"] = z.to_json()
        report["members"] = [[str(a), str(b)] for a, b in chamanara.class_members(z, 8)]
        report["orbit"] = [w.to_json() for w in chamanara.orbit(z, steps)]
        if density_eps is not None:
            report["density_witness"] = chamanara.periodic_density_witness(z, density_eps).to_json()
    if check_semiconj:
        r = chamanara.exhaustive_semiconjugacy(base, period_max)
        report["semiconjugacy"] = {"checked": r["checked"], "failures": [str(f) for f in r["failures"]]}
        ok = ok and not r["failures"]
    report["passed"] = ok
    _emit(report, out)


@main.command("quotient")
@click.option("--base", "-n", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--depth", type=click.IntRange(min=1), default=6, show_default=True)
@click.option("--check", is_flag=True, help="Fiber sizes on side classes and the factor chain sweep.")
@click.option("--max-length", type=click.IntRange(min=2), default=6, show_default=True)
@click.option("--point", help="Show the quotient class and orbit of 'x,y'.")
@click.option("--steps", type=click.IntRange(min=0), default=5, show_default=True)
@out_option
def quotient_cmd(base, depth, check, max_length, point, steps, out):
    """The rotation quotient Q_n and its branch points."""
    cat = quotient.BranchCatalog(base, depth)
    report: dict = {"base": base, "catalog": cat.to_json()}
    ok = True
    if point:
        z = chamanara.parse_point(point, base)
        q = quotient.canonicalize_q(z)
        report["point"] = q.to_json()
        report["orbit"] = [p.to_json() for p in quotient.orbit_q(q, steps)]
    if check:
        keys = cat.keys()
        wrong = []
        for z in quotient.boundary_classes(base, depth, range(1, 13)):
            size = len(quotient.fiber(quotient.canonicalize_q(z)))
            if size != (1 if z.key in keys else 2):
                wrong.append(str(z))
        chain = quotient.exhaustive_factor_chain(base, max_length)
        report["fiber_mismatches"] = wrong[:10]
        report["chain"] = {
            "checked": chain["checked"],
            "semiconjugacy_failures": [str(f) for f in chain["semiconjugacy_failures"]],
            "equivariance_failures": [str(f) for f in chain["equivariance_failures"]],
        }
        ok = not wrong and not chain["semiconjugacy_failures"] and not chain["equivariance_failures"]
    report["passed"] = ok
    _emit(report, out)


@main.command("toral")
@click.option("--matrix", default="2,1,1,1", show_default=True, help="Entries a,b,c,d of [[a,b],[c,d]].")
@click.option("--q", "q", type=click.IntRange(min=1), default=5, show_default=True, help="Grid denominator.")
@out_option
def toral_cmd(matrix, q, out):
    """Periodic orbits, pillowcase data and entropy of a toral automorphism."""
    try:
        A = toral.ToralAuto.parse(matrix)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--matrix") from exc
    orbits = toral.periodic_points(A, q)
    report = {
        "matrix": [list(r) for r in A.matrix],
        "entropy": str(toral.auto_entropy(A)),
        "leading_eigenvalue": str(A.leading),
        "q": q,
        "orbit_periods": [o.period for o in orbits],
        "avoiding_branch_points": [o.to_json() for o in toral.orbits_avoiding_branch(orbits)][:20],
        "smallest_blowup_orbit": toral.smallest_blowup_orbit(A).to_json(),
        "passed": True,
    }
    _emit(report, out)


@main.command("hyperlocal")
@click.option("--lambda", "lam", default="2", show_default=True, callback=_fraction)
@click.option("--eps", default="1/10", show_default=True, callback=_fraction)
@click.option("--samples", type=click.IntRange(min=0), default=1000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--svg", type=click.Path(dir_okay=False), help="Also draw the regions with one excursion.")
@out_option
def hyperlocal_cmd(lam, eps, samples, seed, svg, out):
    """Check the half bound on excursions through D1 and its D3 mirror."""
    if lam <= 1 or eps <= 0:
        raise click.UsageError("need lambda > 1 and eps > 0")
    L = hyperlocal.HypLinear(lam)
    spec = hyperlocal.RegionSpec(lam, eps)
    pts = hyperlocal.sample_entries(spec, samples, seed=seed)
    rep = hyperlocal.verify_half_bound(L, spec, pts)
    mir = hyperlocal.verify_half_bound(L, spec, [hyperlocal.mirror(z) for z in pts], sector=3)
    if svg:
        path = []
        if pts:
            z = pts[0]
            for _ in range(12):
                path.append(z)
                z = L.apply(z)
        plot.write_atomic(svg, plot.region_plot(lam, eps, path))
    _emit({"lambda": str(lam), "eps": str(eps), "D1": rep.to_json(), "D3_mirror": mir.to_json(),
           "passed": rep.passed and mir.passed}, out)


SYSTEMS = ("bernoulli", "fullshift", "identity", "cat", "baker", "quotient")


@main.command("entropy")
@click.option("--system", type=click.Choice(SYSTEMS), help="Closed form (bernoulli) or a spanning estimate.")
@click.option("--p", "pvec", help="Probability vector for bernoulli, e.g. '1/2,1/2'.")
@click.option("--realize", "target", type=float, help="Find a Bernoulli shift with this entropy.")
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--rule", type=click.Choice(["smallest", "bracket"]), default="smallest", show_default=True)
@click.option("--eps", default="1/16", show_default=True, callback=_fraction)
@click.option("--windows", default="0-8", show_default=True, help="Window schedule 'a-b' or 'a,b,c'.")
@click.option("--size", type=click.IntRange(min=1), default=None, help="Sample size parameter (period or grid).")
@out_option
def entropy_cmd(system, pvec, target, tol, rule, eps, windows, size, out):
    """Entropy formulas, realization of a target value, and spanning-set estimates."""
    if target is not None:
        if target <= 0:
            raise click.BadParameter("target entropy must be positive", param_hint="--realize")
        r = entropy.realize_entropy(target, tol, rule)
        _emit({**r.to_json(), "passed": True}, out)
        return
    if system is None:
        raise click.UsageError("give --system or --realize")
    if system == "bernoulli":
        if not pvec:
            raise click.UsageError("bernoulli needs --p")
        try:
            P = ProbabilityVector.parse(pvec)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--p") from exc
        value = entropy.bernoulli_entropy(P)
        rep = entropy.closed_form_report(f"bernoulli{list(map(str, P.entries))}", value, "-sum p log p")
        _emit({**rep.to_json(), "passed": True}, out)
        return
    ws = _parse_windows(windows)
    sysm = {
        "fullshift": lambda: entropy.ShiftSample(2, size or 19),
        "identity": lambda: entropy.IdentitySystem(size or 16),
        "cat": lambda: entropy.TorusSystem(q=size or 64),
        "baker": lambda: entropy.BakerSystem(2, size or 12),
        "quotient": lambda: entropy.QuotientSystem(2, size or 12),
    }[system]()
    rep = entropy.entropy_estimate(sysm, eps, ws)
    _emit({**rep.to_json(), "passed": True}, out)


def _parse_windows(text: str) -> list[int]:
    try:
        if "-" in text:
            a, b = (int(v) for v in text.split("-"))
            return list(range(a, b + 1))
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise click.BadParameter(f"bad schedule {text!r}", param_hint="--windows") from exc


@main.command("invlim")
@click.option("--depth", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--blow", type=click.Choice(["fixed"]), default="fixed", show_default=True)
@click.option("--spec-falsify", is_flag=True)
@click.option("--app-falsify", is_flag=True)
@click.option("--ball", is_flag=True, help="Ball projection bisection for z(1) and z(2).")
@click.option("--zip", "zip_", is_flag=True, help="Near-homeomorphism check on the zip model.")
@click.option("--resolution", type=click.IntRange(min=4, max=14), default=12, show_default=True, help="Grid 2^-res.")
@click.option("--gap", "N", type=click.IntRange(min=1), default=10, show_default=True, help="Specification gap N.")
@click.option("--seed", type=int, default=0, show_default=True)
@out_option
def invlim_cmd(depth, blow, spec_falsify, app_falsify, ball, zip_, resolution, N, seed, out):
    """The blown-up cat map: metric checks and falsification searches."""
    atlas = il.default_atlas()
    z1, z2 = il.special_point(atlas, 1, depth), il.special_point(atlas, -1, depth)
    report: dict = {
        "atlas": atlas.to_json(),
        "depth": depth,
        "z1_z2_distance": il.dinf(z1, z2).value,
        "fixed_directions": il.fixed_directions(atlas.auto.matrix),
    }
    ok = True
    if zip_:
        r = il.near_homeomorphism()
        report["zip"] = r.to_json()
        ok &= r.passed
    if ball:
        b = [il.ball_projection_check(atlas, s, seed=seed, depth=depth) for s in (1, -1)]
        report["ball"] = [x.to_json() for x in b]
        ok &= all(x.passed for x in b)
    if app_falsify:
        r = il.app_falsify(atlas, res=resolution)
        report["app_falsify"] = r.to_json()
        ok &= r.passed
    if spec_falsify:
        r = il.spec_falsify(atlas, N=N, res=resolution)
        report["spec_falsify"] = r.to_json()
        ok &= r.passed
    report["passed"] = bool(ok)
    _emit(report, out)


@main.command("verify")
@click.option("--all", "run_all", is_flag=True, help="Run every acceptance check.")
@click.option("--only", help="Comma-separated check numbers (1-10).")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--timings", is_flag=True, help="Print per-check wall times to stderr.")
@out_option
def verify_cmd(run_all, only, seed, timings, out):
    """The acceptance battery as one JSON report."""
    if not run_all and not only:
        raise click.UsageError("give --all or --only")
    selected = None
    if only:
        try:
            selected = [int(v) for v in only.split(",")]
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--only") from exc
        bad = [v for v in selected if v not in verify.CHECKS]
        if bad:
            raise click.BadParameter(f"unknown checks {bad}", param_hint="--only")

    def tick(cid, secs):
        if timings:
            click.echo(f"check {cid} ({verify.NAMES[cid]}): {secs:.1f}s", err=True)

    report = verify.run(selected, seed, tick)
    text = verify.dumps(report)
    if out:
        plot.write_atomic(out, text)
    else:
        click.echo(text, nl=False)
    sys.exit(0 if report["passed"] else 1)


@main.command("plot")
@click.argument("kind", type=click.Choice(plot.KINDS))
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--base", "-n", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--lambda", "lam", default="2", callback=_fraction)
@click.option("--eps", default="1/10", callback=_fraction)
@click.option("--point", help="Start point 'x,y' for an orbit plot.")
@click.option("--steps", type=click.IntRange(min=0), default=0, show_default=True)
def plot_cmd(kind, out, base, lam, eps, point, steps):
    """Draw a diagram as SVG."""
    if kind == "regions":
        svg = plot.region_plot(lam, eps)
    elif kind == "identification":
        svg = plot.identification_plot(base)
    elif kind == "orbit":
        pts = []
        if point:
            z = chamanara.parse_point(point, base)
            pts = [(w.x, w.y) for w in chamanara.orbit(z, steps)]
        svg = plot.orbit_plot(pts, f"B_{base} orbit")
    else:
        b = il.ball_projection_check(samples=2000)
        svg = plot.ball_plot(b.r_star, il.default_atlas().orbits[0].radius)
    plot.write_atomic(out, svg)
    click.echo(out)


if __name__ == "__main__":
    main()
