"""Job runners shared by the command line and the built-in example suite."""

from dataclasses import dataclass, field

from . import codec
from .errors import PreconditionError, SchemaError, ToolkitError, VerificationFailed
from .gamma import (
    GammaEquivCert,
    QuillenData,
    circle_degree_details,
    circle_ring,
    complete_row,
    gamma_equiv_verify,
    gamma_product,
    quillen_split_verify,
)
from .homotopy import (
    basepoint_shift_homotopy,
    connect_to_identity,
    contract_nil_loop,
    elementary_decomposition,
    graded_homotopy,
    lift_loop_mod_nil,
    polyring_injectivity_homotopy,
    product_split,
    swan_weibel_map,
)
from .matrix import HomotopyCert, LoopRep, check_loop, verify_homotopy, verify_loop
from .oracle import refined_oracle
from .polyrings import Localization
from .rings import QQ
from .winding import PlaneLoop, eta, winding_details

EXIT_PASS, EXIT_FAIL, EXIT_SCHEMA, EXIT_PRECONDITION = 0, 1, 2, 3


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    command: str
    checks: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    error: str = ""
    exit_code: int = EXIT_PASS

    @property
    def ok(self):
        return self.exit_code == EXIT_PASS

    def check(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))
        if not ok and self.exit_code == EXIT_PASS:
            self.exit_code = EXIT_FAIL
        return ok

    def to_json(self):
        return {
            "command": self.command,
            "status": "pass" if self.ok else "fail",
            "exit_code": self.exit_code,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
            "result": self.result,
            "error": self.error,
        }

    def summary(self):
        lines = [f"{self.command}: {'PASS' if self.ok else 'FAIL'} (exit {self.exit_code})"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.ok else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        for k, v in self.result.items():
            if k != "cases":
                lines.append(f"  {k} = {v}")
        if self.error:
            lines.append(f"  error: {self.error}")
        return "\n".join(lines)


# -- payload helpers ------------------------------------------------------------
def _ring(job, default=QQ):
    r = job.get("ring")
    return default if r is None else codec.ring_from_json(r)


def _matrix(job, ring, key="matrix"):
    v = job.get(key)
    if v is None and key == "matrix" and isinstance(job.get("_bare"), list):
        v = job["_bare"]
    if v is None:
        raise SchemaError(f"missing field {key!r}")
    return codec.matrix_from_json(v, ring, key)


def _str(job, key, default):
    v = job.get(key, default)
    if not isinstance(v, str) or not v.isidentifier():
        raise SchemaError(f"{key} must be a variable name")
    return v


def _loop(job, ring, key="matrix", var_key="loop_var", default_var="T"):
    return verify_loop(_matrix(job, ring, key), _str(job, var_key, default_var))


def _cert_json(cert):
    return {
        "matrix": codec.matrix_to_json(cert.matrix),
        "start": codec.matrix_to_json(cert.start.matrix),
        "end": codec.matrix_to_json(cert.end.matrix),
        "loop_var": cert.loop_var,
        "homotopy_var": cert.homotopy_var,
    }


def _plane_loop(job, ring):
    if ring != QQ:
        raise PreconditionError("winding numbers need a loop over the rationals")
    var = _str(job, "var", job.get("loop_var", "T"))
    if "loop" in job:
        pair = job["loop"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError("loop must be [f1, f2]")
        f1, f2 = (codec.entry_from_json(e, ring) for e in pair)
        return PlaneLoop.closed(f1, f2, var)
    m = _matrix(job, ring)
    return PlaneLoop.closed(m.e11, m.e21, var)


# -- commands -------------------------------------------------------------------
def cmd_verify_loop(job, rep, opts):
    ring = _ring(job)
    m = _matrix(job, ring)
    bad = check_loop(m, _str(job, "loop_var", "T"))
    rep.check("determinant is 1 and endpoints are the identity", not bad, "; ".join(bad))


def cmd_verify_homotopy(job, rep, opts):
    ring = _ring(job)
    t = _str(job, "loop_var", "T")
    start = LoopRep(_matrix(job, ring, "start"), t)
    end = LoopRep(_matrix(job, ring, "end"), t)
    cert = HomotopyCert(_matrix(job, ring), start, end, _str(job, "homotopy_var", "S"))
    v = verify_homotopy(cert)
    rep.check("homotopy certificate", v.ok, "; ".join(v.violations))


def cmd_loop_mul(job, rep, opts):
    ring = _ring(job)
    a, b = _loop(job, ring, "a"), _loop(job, ring, "b")
    prod = a.matrix @ b.matrix
    bad = check_loop(prod, a.loop_var)
    rep.check("product is a loop", not bad, "; ".join(bad))
    rep.result["product"] = codec.matrix_to_json(prod)


def _winding_result(loop, rep, opts):
    det = winding_details(loop, opts.get("refine_width"))
    rep.result["winding"] = det.winding
    rep.result["quarter_turns"] = det.quarter_turns
    rep.result["itinerary"] = [[str(t), q] for t, q in det.itinerary]
    rep.check("quarter turns are a multiple of 4", det.quarter_turns % 4 == 0)
    return det.winding


def cmd_winding(job, rep, opts):
    _winding_result(_plane_loop(job, _ring(job)), rep, opts)


def cmd_eta(job, rep, opts):
    ring = _ring(job)
    loop = _loop(job, ring)
    rep.check("input is a loop", True)
    rep.result["eta"] = eta(loop)


def cmd_oracle(job, rep, opts):
    loop = _plane_loop(job, _ring(job))
    n = opts.get("samples") or job.get("samples", 4096)
    if not isinstance(n, int) or n < 2:
        raise SchemaError("samples must be an integer >= 2")
    value, used = refined_oracle(loop.f1, loop.f2, n, loop.var)
    exact = _winding_result(loop, rep, opts)
    rep.result["oracle"] = value
    rep.result["samples"] = used
    rep.check("exact winding matches the rounded oracle", round(value) == exact, f"{value:.6f} vs {exact}")


def cmd_decompose_nil(job, rep, opts):
    ring = _ring(job)
    fac = elementary_decomposition(_matrix(job, ring), job.get("variant"))
    rep.check("factors multiply back exactly", fac.product() == fac.target)
    rep.result["variant"] = fac.variant
    rep.result["factors"] = [[k, codec.entry_to_json(p)] for k, p in fac.factors]


def cmd_connect_identity(job, rep, opts):
    ring = _ring(job)
    var = _str(job, "var", "X")
    beta = connect_to_identity(_matrix(job, ring), var)
    rep.check("beta(0) = I, beta(1) = alpha, beta = I mod eps", True)
    rep.result["beta"] = codec.matrix_to_json(beta)


def cmd_contract_nil(job, rep, opts):
    ring = _ring(job)
    loop = _loop(job, ring, default_var="X")
    cert = contract_nil_loop(loop, _str(job, "var", "T"))
    rep.check("contraction certificate verifies", verify_homotopy(cert).ok)
    rep.result["certificate"] = _cert_json(cert)


def cmd_lift_nil(job, rep, opts):
    target = _ring(job)
    var = _str(job, "loop_var", "X")
    base = verify_loop(_matrix(job, QQ, "loop"), var)
    lifted = lift_loop_mod_nil(base, target, _matrix(job, target, "lift"))
    rep.check("lift is a loop reducing to the input", True)
    rep.result["lift"] = codec.matrix_to_json(lifted.matrix)


def cmd_injectivity(job, rep, opts):
    ring = _ring(job)
    t = _str(job, "loop_var", "T")
    a, b = _loop(job, ring, "a"), _loop(job, ring, "b")
    th = job.get("theta")
    if not isinstance(th, dict):
        raise SchemaError("theta must be an object with matrix, start, end")
    hv = _str(th, "homotopy_var", "S")
    theta = HomotopyCert(
        _matrix(th, ring),
        LoopRep(_matrix(th, ring, "start"), t),
        LoopRep(_matrix(th, ring, "end"), t),
        hv,
    )
    cert = polyring_injectivity_homotopy(a, b, theta, _str(job, "param", "X"), _str(job, "var", "W"))
    rep.check("M verifies", verify_homotopy(cert).ok)
    rep.result["certificate"] = _cert_json(cert)


def cmd_swan_weibel(job, rep, opts):
    ring = _ring(job)
    if "loop" in job or "matrix" in job:
        loop = _loop(job, ring, default_var="X")
        cert, beta0 = graded_homotopy(loop, _str(job, "var", "T"))
        rep.check("homotopy from the degree-0 part verifies", verify_homotopy(cert).ok)
        rep.result["certificate"] = _cert_json(cert)
        rep.result["degree0"] = codec.matrix_to_json(beta0.matrix)
        return
    p = codec.entry_from_json(job.get("poly"), ring)
    graded = job.get("graded")
    out = swan_weibel_map(p, _str(job, "var", "T"), graded)
    rep.check("h(1) is the identity", out.subs({_str(job, "var", "T"): 1}) == p)
    rep.result["image"] = codec.entry_to_json(out)


def cmd_basepoint_shift(job, rep, opts):
    ring = _ring(job)
    loop = _loop(job, ring)
    cert = basepoint_shift_homotopy(loop, _str(job, "param", "X"), _str(job, "var", "S"))
    rep.check("basepoint shift verifies", verify_homotopy(cert).ok)
    rep.result["certificate"] = _cert_json(cert)


def cmd_product_split(job, rep, opts):
    ring = _ring(job)
    left, right = product_split(_loop(job, ring))
    rep.check("both projections are loops", True)
    rep.result["left"] = codec.matrix_to_json(left.matrix)
    rep.result["right"] = codec.matrix_to_json(right.matrix)


def cmd_gamma_mul(job, rep, opts):
    ring = _ring(job)
    r = codec.row_from_json(job.get("r") or {}, ring)
    s = codec.row_from_json(job.get("s") or {}, ring)
    p = gamma_product(r, s)
    rep.check("product witness verifies", p.a * p.b1 + p.b * p.b2 == 1)
    rep.result["product"] = codec.row_to_json(p)


def cmd_complete(job, rep, opts):
    ring = _ring(job)
    row = codec.row_from_json(job.get("row", job), ring)
    m = complete_row(row)
    rep.check("completion has determinant 1", m.det() == 1)
    rep.result["completion"] = codec.matrix_to_json(m)
    if "path" in job:
        out = codec.row_from_json(_need_dict(job, "row_out"), ring)
        cert = GammaEquivCert(_matrix(job, ring, "path"), _matrix(job, ring, "target"), row, out, _str(job, "var", "T"))
        v = gamma_equiv_verify(cert)
        rep.check("equivalence certificate", v.ok, "; ".join(v.violations))


def _need_dict(job, key):
    v = job.get(key)
    if not isinstance(v, dict):
        raise SchemaError(f"missing object {key!r}")
    return v


def cmd_quillen(job, rep, opts):
    R = _ring(job)
    el = {k: codec.entry_from_json(job.get(k), R, allowed=set()) for k in ("s", "t", "u", "v")}
    el = {k: (p.constant() if p else R.zero()) for k, p in el.items()}
    x = _str(job, "var", "X")
    rs, rt, rst = Localization(R, el["s"]), Localization(R, el["t"]), Localization(R, el["s"] * el["t"])
    data = QuillenData(
        R, el["s"], el["t"], el["u"], el["v"],
        _matrix(job, rst, "sigma"), _matrix(job, rs, "psi1"), _matrix(job, rt, "psi2"), x,
    )
    v = quillen_split_verify(data)
    for item in v.violations:
        rep.check(item, False)
    rep.check("sigma = psi1 * psi2 over the double localization", v.ok)


def cmd_circle_degree(job, rep, opts):
    ring = _ring(job, circle_ring())
    row = codec.row_from_json(job.get("row", job), ring)
    d = circle_degree_details(row, ring)
    rep.check("quarter turns are a multiple of 4", d.quarter_turns % 4 == 0)
    rep.result["degree"] = d.degree


COMMANDS = {
    "verify-loop": cmd_verify_loop,
    "verify-homotopy": cmd_verify_homotopy,
    "loop-mul": cmd_loop_mul,
    "winding": cmd_winding,
    "eta": cmd_eta,
    "oracle": cmd_oracle,
    "decompose-nil": cmd_decompose_nil,
    "connect-identity": cmd_connect_identity,
    "contract-nil": cmd_contract_nil,
    "lift-nil": cmd_lift_nil,
    "injectivity-homotopy": cmd_injectivity,
    "swan-weibel": cmd_swan_weibel,
    "basepoint-shift": cmd_basepoint_shift,
    "product-split": cmd_product_split,
    "gamma-mul": cmd_gamma_mul,
    "complete": cmd_complete,
    "quillen-check": cmd_quillen,
    "circle-degree": cmd_circle_degree,
}


def run_job(command, job, **opts):
    """Run one command on a decoded JSON payload; never raises toolkit errors."""
    rep = Report(command)
    if isinstance(job, list):
        job = {"_bare": job}
    if not isinstance(job, dict):
        rep.error, rep.exit_code = "job must be a JSON object", EXIT_SCHEMA
        return rep
    if opts.get("ring") is not None:
        job = dict(job, ring=opts["ring"])
    try:
        COMMANDS[command](job, rep, opts)
    except VerificationFailed as exc:
        rep.check(str(exc), False)
        rep.error = str(exc)
    except ToolkitError as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
        rep.exit_code = exc.exit_code
        for v in getattr(exc, "violations", ()):
            rep.checks.append(Check(v, False))
    return rep


# -- built-in examples ----------------------------------------------------------
def paper_suite():
    """Re-run the built-in worked examples; one check per case."""
    from .suite import CASES

    rep = Report("paper-suite")
    cases = []
    for anchor, fn in CASES:
        try:
            ok, detail = fn()
        except ToolkitError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        rep.check(anchor, ok, detail)
        cases.append({"anchor": anchor, "ok": bool(ok), "detail": detail})
    rep.result["cases"] = cases
    rep.result["passed"] = f"{sum(c['ok'] for c in cases)}/{len(cases)}"
    return rep
