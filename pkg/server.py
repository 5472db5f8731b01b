#!/usr/bin/env python3
"""
Spacing Clust - HTTP API Server

Exposes the clustering algorithms over HTTP. Every request carries its own
instance (points or a distance matrix); nothing is stored between requests.

Usage:
    python server.py [--host HOST] [--port PORT]

Example:
    python server.py --host 0.0.0.0 --port 8000
"""

import argparse
import logging
from typing import List, Optional

import uvicorn
from dotenv import load_dotenv
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, model_validator

# Load environment variables from .env file
load_dotenv()

from src.spacing_clust import __version__
from src.spacing_clust.cli import run_algorithm
from src.spacing_clust.config import configure_logging, get_settings
from src.spacing_clust.dataset import DistanceModel
from src.spacing_clust.errors import ConfigError, DatasetError, InfeasibleError
from src.spacing_clust.linkage import singleton_sweep
from src.spacing_clust.spacing import report
from src.spacing_clust.types import Algo, Scheduler

logger = logging.getLogger("Server")

# Create FastAPI app
app = FastAPI(
    title="Spacing Clust API",
    description="Size-constrained clustering that maximizes inter-group separation",
    version=__version__,
)

# Add CORS middleware to allow browser clients from any origin
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class InstanceBody(BaseModel):
    """Exactly one of points (n×d) or matrix (n×n)."""
    points: Optional[List[List[float]]] = None
    matrix: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.points is None) == (self.matrix is None):
            raise ValueError("provide exactly one of points or matrix")
        return self

    def to_model(self) -> DistanceModel:
        if self.points is not None:
            return DistanceModel.from_points(self.points)
        return DistanceModel.from_matrix(self.matrix)


class ClusterRequest(InstanceBody):
    algo: Algo
    k: int = Field(ge=2)
    L: Optional[int] = Field(default=None, ge=1)
    epsilon: str = "0"
    seed: int = Field(default=0, ge=0)
    scheduler: Scheduler = Scheduler.LPT
    fast: bool = False


class SingletonsRequest(InstanceBody):
    k_min: int = Field(default=2, ge=2)
    k_max: int = Field(ge=2)


@app.exception_handler(ConfigError)
@app.exception_handler(DatasetError)
async def bad_request_handler(request: Request, exc: Exception):
    logger.info(f"{request.url.path}: rejected ({exc})")
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(InfeasibleError)
async def infeasible_handler(request: Request, exc: InfeasibleError):
    logger.info(f"{request.url.path}: infeasible ({exc})")
    return JSONResponse(status_code=409, content={"detail": str(exc)})


@app.get("/")
async def get_root():
    """Root endpoint with API information."""
    return {
        "name": "Spacing Clust API",
        "version": __version__,
        "status": "running",
        "endpoints": {
            "cluster": "POST /cluster",
            "singletons": "POST /singletons",
            "health": "/health",
            "docs": "/docs",
        },
        "algorithms": [a.value for a in Algo],
    }


@app.get("/health")
async def health_check():
    """Health check endpoint for monitoring."""
    settings = get_settings()
    return {
        "status": "healthy",
        "service": "spacing-clust",
        "version": __version__,
        "threads": settings.threads,
        "auto_prim_n": settings.auto_prim_n,
    }


@app.post("/cluster")
def cluster(body: ClusterRequest):
    """
    Run one algorithm.

    Returns the report, the canonical labels and, for Constrained-MaxMST,
    its trace.
    """
    model = body.to_model()
    algo = Algo.MAXMST_FAST if body.fast and body.algo == Algo.MAXMST else body.algo
    labels, trace, c = run_algorithm(model, algo, body.k, L=body.L, epsilon=body.epsilon,
                                     seed=body.seed, scheduler=body.scheduler)
    rep = report(model, labels, algo=algo.value, L=c.L if c else None,
                 epsilon=float(c.epsilon) if c else None, seed=body.seed)
    logger.info(f"/cluster: {algo.value}, n={model.n}, k={body.k} → sizes {rep.sizes}")
    return {
        "report": rep.model_dump(),
        "labels": labels.assign.tolist(),
        "trace": trace.to_dict() if trace is not None else None,
    }


@app.post("/singletons")
def singletons(body: SingletonsRequest):
    """Proportion of singleton groups in single-linkage k-clusterings."""
    if body.k_min > body.k_max:
        raise ConfigError(f"empty k range [{body.k_min}, {body.k_max}]")
    rows = singleton_sweep(body.to_model(), range(body.k_min, body.k_max + 1))
    return {"rows": [{"k": k, "proportion": p} for k, p in rows]}


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Spacing Clust API Server")
    parser.add_argument("--host", default="127.0.0.1", help="Host to bind to (default: 127.0.0.1)")
    parser.add_argument("--port", type=int, default=8000, help="Port to bind to (default: 8000)")
    parser.add_argument("--reload", action="store_true", help="Enable auto-reload for development")

    args = parser.parse_args()
    configure_logging()

    print("\n" + "=" * 60)
    print("📐 Spacing Clust API Server")
    print("=" * 60)
    print(f"Version: {__version__}")
    print(f"Host: {args.host}")
    print(f"Port: {args.port}")
    print(f"API Docs: http://{args.host}:{args.port}/docs")
    print("=" * 60 + "\n")

    uvicorn.run(
        "server:app",
        host=args.host,
        port=args.port,
        reload=args.reload,
        log_level="info"
    )
