"""
chordlab Main Application Entry Point
Chord diagram enumeration and cut-and-join evolution
"""

import sys
from contextlib import asynccontextmanager

from fastapi import FastAPI

from src.api.server import create_app as create_api
from src.cli.commands import main as cli_main


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager"""
    print("🚀 Starting chordlab...")
    print("✅ chordlab is ready to count!")

    yield

    print("🔄 chordlab is shutting down gracefully...")


def create_app() -> FastAPI:
    """uvicorn factory: the API with the lifespan attached"""
    app = create_api()
    app.router.lifespan_context = lifespan
    return app


def main() -> int:
    """Main application entry point"""
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
