"""
chordlab API Server
FastAPI front end for diagram types, censuses, evolution and lemma checks
"""

import logging
from typing import Any, Dict, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from src import __version__
from src.cli.commands import enumerate_document, evolve_document, lemma_document
from src.core.config import FORMAT_VERSION, RunConfig, Settings, load_settings, resolve_run_config
from src.core.exceptions import ChordlabError, ConfigError, InvalidArgumentError
from src.diagrams.core import compute_type, trace_boundaries
from src.diagrams.literal import parse_diagram
from src.series.codec import type_to_dict

logger = logging.getLogger(__name__)

_ENUMERATE_KEYS = ("backbones", "chords", "mode", "connected", "spectrum", "threads")
_EVOLVE_KEYS = ("model", "mode", "ymax", "bmax", "max_sites")
_LEMMA_KEYS = ("which", "n", "trials", "tol", "seed")


def _config(command: str, request: Dict[str, Any], keys, settings: Settings) -> RunConfig:
    flags = {key: request.get(key) for key in keys}
    if command == "evolve" and request.get("orientation") is not None:
        flags["mode"] = request["orientation"]
    if flags.get("backbones") is not None:
        flags["backbones"] = tuple(flags["backbones"])
    return resolve_run_config(command, flags, settings)


def create_app(settings: Optional[Settings] = None) -> FastAPI:
    """Create and configure the FastAPI application"""
    settings = settings or load_settings()

    app = FastAPI(
        title="chordlab",
        description="Exact enumeration and cut-and-join evolution of partial chord diagrams",
        version=__version__,
        docs_url="/docs",
        redoc_url="/redoc",
    )

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ChordlabError)
    async def chordlab_error_handler(request: Request, exc: ChordlabError):
        status_code = 422 if isinstance(exc, (InvalidArgumentError, ConfigError)) else 400
        logger.warning("%s %s failed: %s", request.method, request.url.path, exc)
        return JSONResponse(status_code=status_code, content={"status": "error", "message": str(exc)})

    @app.get("/")
    async def root():
        """Root endpoint - service banner"""
        return {
            "message": "chordlab is running",
            "version": __version__,
            "format": FORMAT_VERSION,
            "status": "active",
            "endpoints": {
                "health": "/health",
                "docs": "/docs",
                "diagram_type": "/diagram/type",
                "enumerate": "/enumerate",
                "evolve": "/evolve",
                "check_lemmas": "/check-lemmas",
            },
        }

    @app.get("/health")
    async def health_check():
        """Health check endpoint"""
        return {
            "status": "healthy",
            "service": "chordlab",
            "version": __version__,
            "max_sites": {"oriented": settings.max_sites_oriented, "nonoriented": settings.max_sites_nonoriented},
        }

    @app.post("/diagram/type")
    def diagram_type(request: dict):
        """Type and boundary cycles of one diagram literal"""
        literal = request.get("literal", "")
        if not literal:
            raise InvalidArgumentError("No diagram literal provided")
        diagram = parse_diagram(literal)
        cycles = trace_boundaries(diagram)
        return {
            "status": "success",
            "type": type_to_dict(compute_type(diagram)),
            "boundaries": [{"length": c.length, "marks": list(c.marks.entries)} for c in cycles],
        }

    @app.post("/enumerate")
    def enumerate_endpoint(request: dict):
        config = _config("enumerate", request, _ENUMERATE_KEYS, settings)
        return {"status": "success", "census": enumerate_document(config)}

    @app.post("/evolve")
    def evolve_endpoint(request: dict):
        config = _config("evolve", request, _EVOLVE_KEYS, settings)
        return {"status": "success", "series": evolve_document(config)}

    @app.post("/check-lemmas")
    def check_lemmas_endpoint(request: dict):
        config = _config("check-lemmas", request, _LEMMA_KEYS, settings)
        return {"status": "success", "report": lemma_document(config)}

    return app
