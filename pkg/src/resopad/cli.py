"""Command-line front end.

render and validate are thin clients over the HTTP API — in-process by
default, or against a running server via --url — so the CLI and the service
cannot drift apart.  serve boots the server itself.
"""

import argparse
import asyncio
import sys

import httpx

from .config import EngineConfig, load_config
from .service.app import create_app


def _call_api(method: str, path: str, payload, url: str = None) -> dict:
    if url:
        with httpx.Client(base_url=url, timeout=120.0) as client:
            response = client.request(method, path, json=payload)
    else:
        async def _run():
            transport = httpx.ASGITransport(app=create_app(EngineConfig()))
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://engine",
                                         timeout=120.0) as client:
                return await client.request(method, path, json=payload)
        response = asyncio.run(_run())
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise SystemExit(f"error: {detail}")
    return response.json()


def _cmd_render(args) -> int:
    payload = {
        "input_path": args.input_path,
        "trajectory_path": args.traj,
        "model_path": args.model,
        "map_path": args.map,
        "output_path": args.out,
        "log_path": args.log,
        "seed": args.seed,
        "block_size": args.block_size,
        "noise_mix": args.noise_mix,
        "trajectory_mode": args.mode,
    }
    stats = _call_api("POST", "/render", payload, args.url)
    print(f"rendered {stats['samples']} samples in {stats['blocks']} blocks")
    if stats["dropped_resonances"]:
        print(f"dropped {stats['dropped_resonances']} resonance(s) above Nyquist")
    if stats["clamped_frequencies"]:
        print(f"clamped {stats['clamped_frequencies']} out-of-range target frequencies")
    print(f"input rms {stats['input_rms']:.6g}, output rms {stats['output_rms']:.6g}")
    return 0


def _cmd_validate(args) -> int:
    payload = {"model_path": args.model, "map_path": args.map,
               "min_bandwidth_hz": args.min_bandwidth}
    report = _call_api("POST", "/validate", payload, args.url)
    if report.get("resonance_count") is not None:
        print(f"model: {report['resonance_count']} resonances "
              f"(parameter dim {report['param_dim']})")
    if report.get("map_points") is not None:
        print(f"map: {report['map_points']} points, {report['map_triangles']} "
              f"triangles, codomain dim {report['map_dim']}")
    if report.get("clamped_bandwidths"):
        print(f"bandwidth clamps at {args.min_bandwidth} Hz: "
              f"{report['clamped_bandwidths']}")
    for message in report["messages"]:
        print(message)
    print("OK" if report["ok"] else "FAILED")
    return 0 if report["ok"] else 1


def _cmd_serve(args) -> int:
    import uvicorn

    config = load_config(args.config) if args.config else EngineConfig()
    app = create_app(config, ui_dir=args.ui)
    uvicorn.run(app, host=config.host, port=config.bridge_port,
                log_level="info")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="resopad",
                                     description="resonance-model position pad engine")
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="offline WAV + trajectory -> WAV")
    render.add_argument("--in", dest="input_path", required=True, metavar="WAV")
    render.add_argument("--traj", required=True, metavar="CSV")
    render.add_argument("--model", required=True, metavar="RES")
    render.add_argument("--map", required=True, metavar="MAP")
    render.add_argument("--out", required=True, metavar="WAV")
    render.add_argument("--seed", type=int, default=0)
    render.add_argument("--log", default=None, help="write the parameter/feature CSV here")
    render.add_argument("--block-size", type=int, default=256)
    render.add_argument("--noise-mix", type=float, default=0.0)
    render.add_argument("--mode", choices=("linear", "step"), default="linear")
    render.add_argument("--url", default=None, help="use a running server instead")
    render.set_defaults(func=_cmd_render)

    validate = sub.add_parser("validate", help="check a model/map pair")
    validate.add_argument("--model", required=True)
    validate.add_argument("--map", required=True)
    validate.add_argument("--min-bandwidth", type=float, default=5.0)
    validate.add_argument("--url", default=None)
    validate.set_defaults(func=_cmd_validate)

    serve = sub.add_parser("serve", help="run the live server")
    serve.add_argument("--config", default=None, help="key = value config file")
    serve.add_argument("--ui", default=None, help="directory of built UI assets")
    serve.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
