"""Command-line client for the workbench service.

By default requests are dispatched to the service in-process (no sockets, no
network); pass --server to talk to a running instance instead.  Exit codes:
0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx


def _algebra_params(args) -> dict:
    return {"p": args.p, "K": args.K, "degree_cap": args.degree_cap}


def _dispatch(args, method: str, path: str, payload, params):
    if args.server:
        with httpx.Client(base_url=args.server.rstrip("/"), timeout=600.0) as client:
            return client.request(method, path, json=payload, params=params)

    # default: drive the service in-process over the ASGI interface
    import asyncio

    from .service import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, base_url="http://bpcobar.local", timeout=None) as client:
            return await client.request(method, path, json=payload, params=params)

    return asyncio.run(go())


def _request(args, method: str, path: str, payload: dict | None = None, params: dict | None = None):
    r = _dispatch(args, method, path, payload, params)
    if r.status_code == 422:
        detail = r.json().get("detail", r.text)
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(2)
    r.raise_for_status()
    return r.json()


def _emit(args, data, text: str):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def main(argv=None) -> int:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="odd prime (default 3)")
    common.add_argument("--K", type=int, default=3, help="number of generators retained")
    common.add_argument("--degree-cap", dest="degree_cap", type=int, default=72)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--server", default=None, help="base URL of a running service")

    parser = argparse.ArgumentParser(prog="bpcobar", description=__doc__, parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p_d = add_parser("d", help="cobar differential of an expression")
    p_d.add_argument("--expr", required=True)
    p_d.add_argument("--module", default="sphere", help="sphere, sphere:<n>, or y7-even")

    p_exc = add_parser("excess", help="excess of the normalized representative")
    p_exc.add_argument("--expr", required=True)

    p_solve = add_parser("solve-coassoc", help="solve psi_bar(T) = target in a monomial span")
    p_solve.add_argument("--target", required=True)
    p_solve.add_argument("--basis", default=None, help="comma-separated Gamma monomials")
    p_solve.add_argument("--all-monomials", action="store_true", help="enumerate the full degree span")

    add_parser("derive-T", help="derive the coaction coefficients T1..T6")

    p_groups = add_parser("groups", help="closed-form group structures")
    p_groups.add_argument("--space", default="e7", choices=["e7", "e7-witness", "sphere", "bundle", "b37"])
    p_groups.add_argument("--j", type=int, default=None)
    p_groups.add_argument("--j-range", dest="j_range", default=None, help="a..b table mode")
    p_groups.add_argument("--delta", type=int, default=None, choices=[2, 5, 8])
    p_groups.add_argument("--n", type=int, default=None)
    p_groups.add_argument("--m", type=int, default=None)
    p_groups.add_argument("--k", type=int, default=None)

    add_parser("dump-structure", help="print the structure maps")

    p_pc = add_parser("parse-check", help="parse an expression and print its canonical form")
    p_pc.add_argument("--expr", required=True)

    p_ver = add_parser("verify-paper", help="run the reproduction ledger")
    p_ver.add_argument("--verify-degree-cap", dest="verify_degree_cap", type=int, default=None)
    p_ver.add_argument("--negative-control", action="store_true", help="flip the conjugation sign (expected to fail)")
    p_ver.add_argument("--id", action="append", dest="ids", default=None, help="run only these entries")

    p_comod = add_parser("comodule", help="print a built-in comodule definition file")
    p_comod.add_argument("--name", default="y7-even")

    p_serve = add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)

    if args.command == "d":
        data = _request(args, "POST", "/v1/differential", {**_algebra_params(args), "expr": args.expr, "module": args.module})
        _emit(args, data, data["result"])
    elif args.command == "excess":
        data = _request(args, "POST", "/v1/excess", {**_algebra_params(args), "expr": args.expr})
        _emit(args, data, str(data["excess"]))
    elif args.command == "parse-check":
        data = _request(args, "POST", "/v1/parse-check", {**_algebra_params(args), "expr": args.expr})
        _emit(args, data, data["canonical"])
    elif args.command == "solve-coassoc":
        payload = {**_algebra_params(args), "target": args.target, "all_monomials": args.all_monomials}
        if args.basis:
            payload["basis"] = [b.strip() for b in args.basis.split(",")]
        data = _request(args, "POST", "/v1/solve-coassoc", payload)
        if data["status"] != "ok":
            _emit(args, data, data["status"])
            return 1
        lines = [f"particular: {data['particular_element']}"]
        for i, g in enumerate(data["homogeneous_elements"]):
            lines.append(f"homogeneous c{i + 1}: {g}")
        for c in data["congruences"]:
            lines.append(f"congruence: {c['parameter']} = {c['residue']} mod {c['modulus']}")
        _emit(args, data, "\n".join(lines))
    elif args.command == "derive-T":
        data = _request(args, "POST", "/v1/derive-t", _algebra_params(args))
        lines = []
        for name in ["T6", "T4", "T5", "T1", "T2", "T3"]:
            sol = data["solutions"][name]
            lines.append(f"{name} = {sol['particular']}")
            for pname, vec in sol["kernel"].items():
                lines.append(f"  + {pname} * ({vec})")
            for pname, vec in sol["responses"].items():
                lines.append(f"  + {pname} * ({vec})")
            for c in sol["congruences"]:
                lines.append(f"  congruence: {c['parameter']} = {c['residue']} mod {c['modulus']}")
            lines.append(f"  leading: {sol['leading']}  (excess {sol['leading_excess']})")
        _emit(args, data, "\n".join(lines))
    elif args.command == "groups":
        if args.space in ("e7", "e7-witness") and args.delta is None:
            parser.error("--delta is required for the e7 calculators (one of 2, 5, 8)")
        if args.space == "e7":
            params = {"delta": args.delta}
            if args.j_range:
                params["j_range"] = args.j_range
            elif args.j is not None:
                params["j"] = args.j
            else:
                parser.error("provide --j or --j-range")
            data = _request(args, "GET", "/v1/groups/e7", params=params)
            if "results" in data:
                lines = [f"j={row['j']}: v2j = {row['v2j']['pretty']}; v2jm1 = {row['v2jm1']['pretty']}" for row in data["results"]]
                lines.append(f"note: {data['results'][0]['note']}" if data["results"] else "")
            else:
                lines = [
                    f"v2j = {data['v2j']['pretty']}",
                    f"v2jm1 = {data['v2jm1']['pretty']}",
                    f"note: {data['note']}",
                ]
            _emit(args, data, "\n".join(lines))
        elif args.space == "e7-witness":
            data = _request(args, "GET", "/v1/groups/e7-witness", params={"delta": args.delta})
            _emit(args, data, f"j = {data['j']} ({data['residue_class']}): {data['group']['pretty']}, exponent {data['exponent']}\nnote: {data['note']}")
        elif args.space == "sphere":
            if args.n is None or args.m is None:
                parser.error("--n and --m are required for the sphere calculator")
            data = _request(args, "GET", "/v1/groups/sphere", params={"n": args.n, "m": args.m, "p": args.p})
            _emit(args, data, str(data["exponent"]))
        elif args.space == "bundle":
            if args.n is None or args.k is None or args.j is None:
                parser.error("--n, --k and --j are required for the bundle calculator")
            data = _request(args, "GET", "/v1/groups/bundle", params={"n": args.n, "k": args.k, "j": args.j, "p": args.p})
            _emit(args, data, str(data["exponent"]))
        else:
            if args.j is None:
                parser.error("--j is required for the b37 comparison")
            data = _request(args, "GET", "/v1/groups/b37", params={"j": args.j})
            text = f"s7 exponent {data['s7_exponent']}, bundle exponent {data['b37_exponent']}, map: {data['map']}"
            _emit(args, data, text)
    elif args.command == "dump-structure":
        data = _request(args, "GET", "/v1/structure", params=_algebra_params(args))
        lines = [f"m{i} = {m}" for i, m in enumerate(data["m"])]
        lines += [f"eta({k}) = {v}" for k, v in data["eta_v"].items()]
        lines += [f"psi({k}) = {v}" for k, v in data["psi_h"].items()]
        _emit(args, data, "\n".join(lines))
    elif args.command == "comodule":
        data = _request(args, "GET", f"/v1/comodule/{args.name}", params=_algebra_params(args))
        _emit(args, data, data["text"].rstrip("\n"))
    elif args.command == "verify-paper":
        payload = {"negative_control": args.negative_control}
        if args.verify_degree_cap is not None:
            payload["degree_cap"] = args.verify_degree_cap
        if args.ids:
            payload["ids"] = args.ids
        data = _request(args, "POST", "/v1/verify", payload)
        _emit(args, data, data["report"])
        return 0 if data["passed"] else 1
    elif args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
