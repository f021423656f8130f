"""Thin-client CLI: every command talks to the HTTP service.

By default the service app is embedded in-process (no daemon needed); pass
--server to point the same commands at a running instance, or use
`muxim serve` to start one.
"""

from __future__ import annotations

import json
import sys

import click

from .manifest import load_multiplex, save_multiplex
from .service import schemas as s


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    # embedded mode: drive the ASGI app directly through the same HTTP surface
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _post(ctx, path: str, payload: dict) -> dict:
    with _client(ctx.obj["server"]) as client:
        response = client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail", response.text)
            except Exception:
                detail = response.text
            raise click.ClickException(f"{path} failed ({response.status_code}): {detail}")
        return response.json()


def _manifest_payload(manifest: str) -> dict:
    """Load a local manifest and inline it, so files stay client-side."""
    m = load_multiplex(manifest)
    layers = [layer.model_dump() for layer in s.multiplex_to_layers(m)]
    return {
        "layers": [
            {
                "edges": layer["edges"],
                "model": layer["model"],
                "isolated": layer["isolated"],
            }
            for layer in layers
        ]
    }


def _config_payload(ctx) -> dict:
    return {
        "seed": ctx.obj["seed"],
        "samples": ctx.obj["samples"],
        "max_hops": ctx.obj["max_hops"],
    }


def _options_payload(ctx, estimator, seeder, ris_samples, eval_samples) -> dict:
    return {
        "estimator": estimator,
        "seeder": seeder,
        "profit_mode": ctx.obj["profit_mode"],
        "solver": ctx.obj["solver"],
        "ris_samples": ris_samples,
        "eval_samples": eval_samples,
    }


@click.group()
@click.option("--server", default=None, help="Service URL; embedded app when omitted.")
@click.option("--seed", default=0, type=int, show_default=True, help="Master RNG seed.")
@click.option("--samples", default=1000, type=int, show_default=True,
              help="Monte Carlo samples per estimate.")
@click.option("--max-hops", default=None, type=int, help="Propagation round cap.")
@click.option("--workers", default=1, type=int, show_default=True,
              help="Process-pool bound for parallel stages.")
@click.option("--profit-mode", default="multiplex",
              type=click.Choice(["multiplex", "per_layer"]), show_default=True)
@click.option("--solver", default="greedy_half",
              type=click.Choice(["exact_dp", "greedy_half"]), show_default=True)
@click.pass_context
def main(ctx, server, seed, samples, max_hops, workers, profit_mode, solver):
    """Influence maximization on multiplex networks."""
    ctx.obj = {
        "server": server,
        "seed": seed,
        "samples": samples,
        "max_hops": max_hops,
        "workers": workers,
        "profit_mode": profit_mode,
        "solver": solver,
    }


@main.command()
@click.option("--kind", default="ba", type=click.Choice(["ba", "er"]), show_default=True)
@click.option("--n", default=200, type=int, show_default=True, help="Nodes per layer.")
@click.option("--m", default=4, type=int, show_default=True, help="BA attachment edges.")
@click.option("--avg-degree", default=5.0, type=float, show_default=True,
              help="ER average degree.")
@click.option("--k", "num_layers", default=3, type=int, show_default=True)
@click.option("--overlap", default=0, type=int, show_default=True)
@click.option("--models", default="lt,ic,mlt", show_default=True,
              help="Comma-separated per-layer model kinds.")
@click.option("--weights", default="uniform01", show_default=True,
              help="uniform01 | uniform:LO:HI | constant:V")
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
@click.option("--name", default="multiplex", show_default=True)
@click.pass_context
def generate(ctx, kind, n, m, avg_degree, num_layers, overlap, models, weights, out, name):
    """Generate a synthetic multiplex and write manifest + edge files."""
    model_list = [tok.strip() for tok in models.split(",")]
    if len(model_list) == 1:
        model_list = model_list * num_layers
    if len(model_list) != num_layers:
        raise click.ClickException("--models must list one kind per layer")
    if weights == "uniform01":
        dist = {"kind": "uniform", "low": 0.0, "high": 1.0}
    elif weights.startswith("uniform:"):
        _, lo, hi = weights.split(":")
        dist = {"kind": "uniform", "low": float(lo), "high": float(hi)}
    elif weights.startswith("constant:"):
        dist = {"kind": "constant", "value": float(weights.split(":")[1])}
    else:
        raise click.ClickException(f"bad --weights {weights!r}")
    layer = {"kind": kind, "n": n, "m": m, "avg_degree": avg_degree}
    payload = {
        "multiplex": {
            "generate": {
                "layers": [layer] * num_layers,
                "models": model_list,
                "overlap": overlap,
                "weight_dist": dist,
                "seed": ctx.obj["seed"],
            }
        },
        "include_layers": True,
    }
    body = _post(ctx, "/multiplexes", payload)
    mx = s.layers_to_multiplex([s.LayerIn(**layer) for layer in body["layers"]])
    manifest_path = save_multiplex(mx, out, name=name)
    click.echo(
        f"wrote {manifest_path}: k={body['k']} users={body['users']} "
        f"overlap={body['overlap_users']}"
    )


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--seeds", required=True, help="Comma-separated seed user ids.")
@click.pass_context
def estimate(ctx, manifest, seeds):
    """Estimate the spread of a given seed set."""
    seed_ids = [int(tok) for tok in seeds.split(",") if tok.strip()]
    payload = {
        "multiplex": _manifest_payload(manifest),
        "seeds": seed_ids,
        "config": _config_payload(ctx),
        "workers": ctx.obj["workers"],
    }
    body = _post(ctx, "/estimate", payload)
    sigma = body["sigma"]
    click.echo(f"sigma = {sigma['mean']:.4f} +- {sigma['std_error']:.4f} "
               f"({sigma['samples']} samples)")
    click.echo("per-layer activation means: "
               + ", ".join(f"{x:.2f}" for x in body["per_layer_activation_means"]))


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--algorithm", required=True,
              type=click.Choice(["isf", "ksn", "es", "bsn"]))
@click.option("-l", "--budget", required=True, type=int)
@click.option("--estimator", default="mc", type=click.Choice(["mc", "exact"]),
              show_default=True)
@click.option("--seeder", default="celf", type=click.Choice(["celf", "ris", "brute"]),
              show_default=True)
@click.option("--ris-samples", default=10000, type=int, show_default=True)
@click.option("--eval-samples", default=None, type=int,
              help="Samples for the final spread evaluation.")
@click.option("--out-json", default=None, type=click.Path(),
              help="Dump the full response to a JSON file.")
@click.pass_context
def select(ctx, manifest, algorithm, budget, estimator, seeder, ris_samples,
           eval_samples, out_json):
    """Select a seed set with one algorithm and report its spread."""
    payload = {
        "multiplex": _manifest_payload(manifest),
        "algorithm": algorithm,
        "budget": budget,
        "config": _config_payload(ctx),
        "options": _options_payload(ctx, estimator, seeder, ris_samples, eval_samples),
        "workers": ctx.obj["workers"],
    }
    body = _post(ctx, "/select", payload)
    sigma = body["sigma"]
    click.echo(f"{algorithm} l={budget}: seeds = {body['seeds']}")
    click.echo(f"sigma = {sigma['mean']:.4f} +- {sigma['std_error']:.4f}")
    if body.get("budget_split") is not None:
        click.echo(f"per-layer budget split: {body['budget_split']}")
    if out_json:
        with open(out_json, "w", encoding="utf-8") as fh:
            json.dump(body, fh, indent=2)
        click.echo(f"wrote {out_json}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True),
              help="JSON experiment config (see docs/formats.md).")
@click.option("--out", required=True, type=click.Path(), help="CSV output path.")
@click.pass_context
def experiment(ctx, config_path, out):
    """Run an (algorithm x budget) sweep and write the results CSV."""
    with open(config_path, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    multiplex = config["multiplex"]
    if "manifest" in multiplex:
        multiplex = _manifest_payload(multiplex["manifest"])
    payload = {
        "multiplex": multiplex,
        "algorithms": config["algorithms"],
        "budgets": config["budgets"],
        "config": {
            "seed": config.get("seed", ctx.obj["seed"]),
            "samples": config.get("samples", ctx.obj["samples"]),
            "max_hops": config.get("max_hops", ctx.obj["max_hops"]),
        },
        "options": {
            "estimator": config.get("estimator", "mc"),
            "seeder": config.get("seeder", "celf"),
            "profit_mode": config.get("profit_mode", ctx.obj["profit_mode"]),
            "solver": config.get("solver", ctx.obj["solver"]),
            "ris_samples": config.get("ris_samples", 10000),
            "eval_samples": config.get("eval_samples"),
        },
        "workers": config.get("workers", ctx.obj["workers"]),
    }
    body = _post(ctx, "/experiment", payload)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(body["csv"])
    click.echo(f"wrote {out} ({len(body['records'])} rows)")


@main.command(name="mckp-solve")
@click.option("--instance", required=True, type=click.Path(exists=True),
              help='JSON: {"classes": [[{"cost":..,"profit":..},..],..], "budget": N}')
@click.pass_context
def mckp_solve(ctx, instance):
    """Solve a multiple-choice knapsack instance (debugging helper)."""
    with open(instance, "r", encoding="utf-8") as fh:
        inst = json.load(fh)
    payload = {
        "classes": inst["classes"],
        "budget": inst["budget"],
        "solver": ctx.obj["solver"],
    }
    body = _post(ctx, "/mckp/solve", payload)
    click.echo(f"picks = {body['picks']}")
    click.echo(f"cost = {body['total_cost']}, profit = {body['total_profit']}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("muxim.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main(sys.argv[1:])
