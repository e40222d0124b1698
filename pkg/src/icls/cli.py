"""Command line entry points: serve the API, seed demo content."""

from __future__ import annotations

import argparse

from .api import create_app
from .config import AppConfig
from .seed import seed_demo
from .service import Application


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="icls", description="Culture learning suite backend")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=None)
    serve.add_argument("--db", default=None, help="sqlite database path")
    serve.add_argument("--seed-demo", action="store_true", help="seed demo content on startup")

    seed = sub.add_parser("seed", help="seed demo content into a database")
    seed.add_argument("--db", default=None, help="sqlite database path")

    args = parser.parse_args(argv)
    config = AppConfig.from_env()
    if getattr(args, "db", None):
        config.database_path = args.db
    if getattr(args, "port", None):
        config.port = args.port

    if args.command == "seed":
        service = Application(config)
        created = seed_demo(service)
        print(f"seeded {created['units']} units and {created['stories']} stories into {config.database_path}")
        service.close()
        return 0

    import uvicorn

    service = Application(config)
    if args.seed_demo:
        created = seed_demo(service)
        print(f"seeded {created['units']} units and {created['stories']} stories")
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
