"""FastAPI service wrapping the workbench.

All computation is exact and stateless apart from the per-config structure
tables, which are built once and shared across requests.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query

from .. import __version__
from ..algebra import AlgebraConfig, GammaElement
from ..cobar import CobarElement, desuspend_normalize, differential, excess, raw_excess
from ..comodule import builtin_comodule, y7_even
from ..groups import (
    DELTA_NOTE,
    b37_vs_s7,
    bk_exponent,
    e7_exponent_witness,
    e7_groups,
    sphere_e2_order,
)
from ..ledger import format_report, run_ledger
from ..parser import ExprSyntaxError, format_cobar, parse, parse_gamma
from ..plocal import PLocalityViolation
from ..solver import (
    DegreeMismatch,
    NoSolution,
    SolveRequest,
    derive_T_chain,
    enumerate_basis,
    solve,
)
from ..structure import format_m_poly, hazewinkel_m, tables
from . import models


def _config(params) -> AlgebraConfig:
    try:
        return AlgebraConfig(params.p, params.K, params.degree_cap)
    except ValueError as err:
        raise HTTPException(status_code=422, detail=str(err))


def _parse(expr: str, cfg: AlgebraConfig) -> CobarElement:
    try:
        return parse(expr, cfg)
    except (ExprSyntaxError, PLocalityViolation, ValueError) as err:
        raise HTTPException(status_code=422, detail=str(err))


def _group_model(g) -> models.GroupModel:
    return models.GroupModel(
        factors=list(g.factors),
        alternatives=list(g.ambiguous_alternatives) if g.ambiguous_alternatives else None,
        pretty=str(g),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="bpcobar", version=__version__)

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.get("/v1/structure", response_model=models.StructureResponse)
    def structure(p: int = 3, K: int = 3, degree_cap: int = 72):
        cfg = _config(models.AlgebraParams(p=p, K=K, degree_cap=degree_cap))
        t = tables(cfg)
        return models.StructureResponse(
            p=cfg.p,
            K=cfg.K,
            degree_cap=cfg.degree_cap,
            m=[format_m_poly(hazewinkel_m(cfg, n)) for n in range(cfg.K + 1)],
            eta_v={f"v{i}": str(t.eta_v[i]) for i in range(1, cfg.K + 1)},
            psi_h={
                f"h{i}": format_cobar(
                    CobarElement(cfg, {((m1, m2), cfg.zero_exp(), None): c for (m1, m2), c in t.psi_h[i].items()})
                )
                for i in range(1, cfg.K + 1)
            },
        )

    @app.post("/v1/parse-check", response_model=models.ParseCheckResponse)
    def parse_check(req: models.ExprRequest):
        cfg = _config(req)
        e = _parse(req.expr, cfg)
        degrees = sorted({d for w in e.terms if (d := e.word_degree(w)) is not None})
        return models.ParseCheckResponse(
            canonical=format_cobar(e),
            tensor_lengths=sorted(e.s_values()),
            degrees=degrees,
        )

    @app.post("/v1/differential", response_model=models.DifferentialResponse)
    def diff(req: models.DifferentialRequest):
        cfg = _config(req)
        e = _parse(req.expr, cfg)
        try:
            M = builtin_comodule(req.module, cfg)
            result = differential(e, M)
        except (ValueError, KeyError) as err:
            raise HTTPException(status_code=422, detail=str(err))
        return models.DifferentialResponse(result=format_cobar(result))

    @app.post("/v1/excess", response_model=models.ExcessResponse)
    def excess_route(req: models.ExcessRequest):
        cfg = _config(req)
        e = _parse(req.expr, cfg)
        if not e.terms:
            return models.ExcessResponse(excess=None, normalized="0")
        normalized = desuspend_normalize(e)
        return models.ExcessResponse(excess=raw_excess(normalized), normalized=format_cobar(normalized))

    @app.post("/v1/solve-coassoc", response_model=models.SolveCoassocResponse)
    def solve_coassoc(req: models.SolveCoassocRequest):
        cfg = _config(req)
        target = _parse(req.target, cfg)
        try:
            if req.all_monomials:
                degs = {
                    sum(cfg.mono_degree(m) for m in slots)
                    for (slots, _, _) in target.canonical_terms()
                }
                if len(degs) != 1:
                    raise DegreeMismatch(f"target degrees {sorted(degs)}")
                basis = enumerate_basis(cfg, degs.pop())
            else:
                if not req.basis:
                    raise HTTPException(status_code=422, detail="provide a basis or all_monomials=true")
                basis = [parse_gamma(b, cfg) for b in req.basis]
            sol = solve(SolveRequest(target=target, basis=basis, p=cfg.p))
        except NoSolution as err:
            return models.SolveCoassocResponse(status=f"no-solution: {err}")
        except (DegreeMismatch, ExprSyntaxError, ValueError) as err:
            raise HTTPException(status_code=422, detail=str(err))
        return models.SolveCoassocResponse(
            status="ok",
            basis=[str(b) for b in sol.basis],
            particular=[str(c) for c in sol.particular],
            particular_element=str(sol.particular_element()),
            homogeneous_basis=[[str(c) for c in vec] for vec in sol.homogeneous_basis],
            homogeneous_elements=[str(g) for g in sol.homogeneous_elements()],
            congruences=[
                models.CongruenceModel(parameter=f"c{i + 1}", residue=r, modulus=m)
                for i, r, m in sol.congruence_constraints
            ],
        )

    @app.post("/v1/derive-t", response_model=models.DeriveTResponse)
    def derive_t(req: models.AlgebraParams):
        cfg = _config(req)
        try:
            chain = derive_T_chain(cfg)
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err))
        solutions = {}
        for name, sol in chain.solutions.items():
            solutions[name] = models.TSolutionModel(
                particular=str(sol.particular),
                kernel={pname: str(vec) for pname, vec in sol.kernel},
                responses={pname: str(vec) for pname, vec in sol.responses},
                congruences=[
                    models.CongruenceModel(parameter=p_, residue=r, modulus=m)
                    for p_, r, m in sol.congruences
                ],
                leading=str(sol.leading),
                leading_excess=sol.leading_excess,
            )
        return models.DeriveTResponse(
            solutions=solutions,
            congruences=[
                models.CongruenceModel(parameter=p_, residue=r, modulus=m)
                for p_, r, m in chain.congruences()
            ],
        )

    @app.get("/v1/groups/e7")
    def groups_e7(j: int | None = None, delta: int = Query(...), j_range: str | None = None):
        def one(jj: int) -> models.E7GroupsResponse:
            try:
                v2j, v2jm1 = e7_groups(jj, delta)
            except ValueError as err:
                raise HTTPException(status_code=422, detail=str(err))
            return models.E7GroupsResponse(
                j=jj,
                v2j=_group_model(v2j),
                v2jm1=_group_model(v2jm1),
                ambiguous=v2j.ambiguous or v2jm1.ambiguous,
                delta=delta,
                note=DELTA_NOTE,
            )

        if j_range:
            try:
                a, b = (int(x) for x in j_range.split(".."))
            except ValueError:
                raise HTTPException(status_code=422, detail="j_range must look like 3..17")
            return models.E7RangeResponse(results=[one(jj) for jj in range(a, b + 1)])
        if j is None:
            raise HTTPException(status_code=422, detail="provide j or j_range")
        return one(j)

    @app.get("/v1/groups/e7-witness", response_model=models.WitnessResponse)
    def witness(delta: int = Query(...)):
        try:
            w = e7_exponent_witness(delta)
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err))
        return models.WitnessResponse(
            j=w["j"],
            residue_class=w["residue_class"],
            exponent=w["exponent"],
            group=_group_model(w["group"]),
            delta=delta,
            note=DELTA_NOTE,
        )

    @app.get("/v1/groups/sphere", response_model=models.SphereOrderResponse)
    def sphere_order(n: int, m: int, p: int = 3):
        try:
            return models.SphereOrderResponse(n=n, m=m, exponent=sphere_e2_order(n, m, p))
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err))

    @app.get("/v1/groups/bundle", response_model=models.BundleExponentResponse)
    def bundle(n: int, k: int, j: int, p: int = 3):
        try:
            return models.BundleExponentResponse(n=n, k=k, j=j, exponent=bk_exponent(n, k, j, p))
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err))

    @app.get("/v1/groups/b37", response_model=models.B37Response)
    def b37(j: int):
        try:
            return models.B37Response(**b37_vs_s7(j))
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err))

    @app.get("/v1/comodule/{name}", response_model=models.ComoduleResponse)
    def comodule(name: str, p: int = 3, K: int = 3, degree_cap: int = 72):
        cfg = _config(models.AlgebraParams(p=p, K=K, degree_cap=degree_cap))
        try:
            M = builtin_comodule(name, cfg)
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err))
        return models.ComoduleResponse(name=M.name, text=M.to_text(), coassociative=M.check_coassociativity())

    @app.post("/v1/verify", response_model=models.VerifyResponse)
    def verify(req: models.VerifyRequest):
        results = run_ledger(
            degree_cap=req.degree_cap,
            negative_control=req.negative_control,
            ids=set(req.ids) if req.ids else None,
        )
        entries = [
            models.VerifyEntryModel(
                id=r.id,
                statement=r.statement,
                kind=r.kind,
                status=r.status,
                computed=r.computed,
                expected=r.expected,
            )
            for r in results
        ]
        return models.VerifyResponse(
            entries=entries,
            passed=all(r.status != "fail" for r in results),
            report=format_report(results),
        )

    return app


app = create_app()
