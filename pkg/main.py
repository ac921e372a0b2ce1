from fastapi import FastAPI, HTTPException, status
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field
from typing import Optional, List, Dict
from config import settings
from orchestrator import GeometryOrchestrator, CounterexampleFinding, MATH_ERRORS, USAGE_ERRORS
import uvicorn


# Pydantic models for request/response
class RingRequest(BaseModel):
    ring: str = Field(..., description="Ring descriptor: zmod:N, dual:P or rational")


class LocalityResponse(BaseModel):
    ring: str
    is_local: bool
    witness: Optional[List[str]] = None
    reason: str = ""
    sequents: Dict[str, bool] = {}


class BuildRequest(BaseModel):
    ring: str = Field(..., description="Ring descriptor of a finite ring")
    kind: str = Field("projective", description="affine or projective")


class BuildResponse(BaseModel):
    ring: str
    kind: str
    n_points: int
    n_lines: int
    plane_text: str


class VerifyRequest(BaseModel):
    plane_text: str = Field(..., description="Plane in the line-based relational format")
    theory: Optional[str] = Field(None, description="affine or projective; defaults to the plane's kind")
    seed: Optional[int] = Field(None, ge=0, description="Seed for sampled configuration checks")
    samples: Optional[int] = Field(None, gt=0, description="Sampling budget for configuration checks")


class ReportResponse(BaseModel):
    passed: bool
    lines: List[str]


class CoordinatizeRequest(BaseModel):
    plane_text: str = Field(..., description="Plane in the line-based relational format")
    frame: Optional[List[int]] = Field(None, description="X,Y,O for affine planes or A,B,O,I for projective planes")
    seed: Optional[int] = Field(None, ge=0, description="Seed for sampled configuration checks")
    samples: Optional[int] = Field(None, gt=0, description="Sampling budget for configuration checks")


class CoordinatizeResponse(BaseModel):
    kind: str
    frame: List[int]
    ring_size: int
    labels: List[str]
    add_table: List[List[int]]
    mul_table: List[List[int]]
    identified_as: Optional[str] = None
    point_table: List[List] = Field(..., description="Pairs of coordinates and plane point index")
    isomorphism: bool


class TorsorRequest(BaseModel):
    ring: str = Field(..., description="Ring descriptor of a finite ring")
    kind: str = Field("affine", description="affine (G(R) on triples), projective (H(R) on frames) or right (G(Tp))")
    seed: Optional[int] = Field(None, ge=0, description="Seed for sampled action-law checks")


class HealthResponse(BaseModel):
    status: str
    components: Dict


# Initialize FastAPI app
app = FastAPI(
    title=settings.api_title or "Incidence Geometry over Local Rings",
    description="Finite projective and affine planes over local rings: axioms, coordinatization, morphisms",
    version="1.0.0"
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Initialize orchestrator
orchestrator = None


@app.on_event("startup")
async def startup_event():
    """Initialize the geometry orchestrator on startup"""
    global orchestrator
    try:
        orchestrator = GeometryOrchestrator(verbose=True)
        print("✓ Application started successfully")
    except Exception as e:
        print(f"✗ Failed to initialize orchestrator: {e}")
        raise


def _raise_http(e: Exception, action: str):
    """Map engine errors onto HTTP status codes"""
    if isinstance(e, USAGE_ERRORS):
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Invalid input: {str(e)}")
    if isinstance(e, MATH_ERRORS):
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=f"{action} failed: {str(e)}")
    raise HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail=f"Error {action.lower()}: {str(e)}"
    )


@app.get("/", tags=["General"])
async def root():
    """Root endpoint with API information"""
    return {
        "message": "Incidence Geometry over Local Rings API",
        "version": "1.0.0",
        "rings": ["zmod:N", "dual:P", "rational"],
        "endpoints": {
            "locality": "/api/rings/check-local",
            "build": "/api/planes/build",
            "verify": "/api/planes/verify",
            "counterexamples": "/api/counterexamples",
            "coordinatize": "/api/coordinatize",
            "torsors": "/api/torsors/verify",
            "health": "/api/health"
        }
    }


@app.post("/api/rings/check-local", response_model=LocalityResponse, tags=["Rings"])
async def check_local(request: RingRequest):
    """Decide locality and report the first violating pair"""
    try:
        return LocalityResponse(**orchestrator.check_local(request.ring))
    except Exception as e:
        _raise_http(e, "Checking locality")


@app.post("/api/planes/build", response_model=BuildResponse, tags=["Planes"])
async def build_plane(request: BuildRequest):
    """Export ℙ(R) or 𝔸(R) of a finite ring in the relational plane format"""
    try:
        return BuildResponse(**orchestrator.build_plane(request.ring, request.kind))
    except Exception as e:
        _raise_http(e, "Building plane")


@app.post("/api/planes/verify", response_model=ReportResponse, tags=["Planes"])
async def verify_plane(request: VerifyRequest):
    """
    Run the affine or projective axiom suite on a plane file

    Coherent axioms are checked exhaustively; configuration theorems are
    enumerated on small planes and sampled with the given seed otherwise.
    """
    try:
        result = orchestrator.verify_plane_text(request.plane_text, request.theory, request.seed, request.samples)
        return ReportResponse(passed=result["passed"], lines=result["lines"])
    except Exception as e:
        _raise_http(e, "Verifying plane")


@app.post("/api/counterexamples", response_model=List[CounterexampleFinding], tags=["Planes"])
async def counterexamples():
    """Re-check the recorded counterexamples over Z/4, Z/6 and the rationals"""
    try:
        return orchestrator.counterexamples()
    except Exception as e:
        _raise_http(e, "Checking counterexamples")


@app.post("/api/coordinatize", response_model=CoordinatizeResponse, tags=["Coordinatization"])
async def coordinatize(request: CoordinatizeRequest):
    """Build the coordinate ring of a plane and the coordinate isomorphism"""
    try:
        return CoordinatizeResponse(**orchestrator.coordinatize(
            request.plane_text, request.frame, seed=request.seed, samples=request.samples))
    except Exception as e:
        _raise_http(e, "Coordinatizing plane")


@app.post("/api/torsors/verify", response_model=ReportResponse, tags=["Coordinatization"])
async def verify_torsor(request: TorsorRequest):
    """Check that a transformation group acts freely and transitively"""
    try:
        result = orchestrator.torsor(request.ring, request.kind, seed=request.seed)
        return ReportResponse(passed=result["passed"], lines=result["lines"])
    except Exception as e:
        _raise_http(e, "Verifying torsor")


@app.get("/api/health", response_model=HealthResponse, tags=["Health"])
async def health_check():
    """Check health status of the engines"""
    try:
        health_status = orchestrator.health_check()
        all_healthy = health_status["ring"] and health_status["projective"]
        return HealthResponse(
            status="healthy" if all_healthy else "degraded",
            components=health_status
        )
    except Exception as e:
        raise HTTPException(
            status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
            detail=f"Health check failed: {str(e)}"
        )


if __name__ == "__main__":
    uvicorn.run(
        "main:app",
        host=settings.api_host,
        port=settings.api_port,
        reload=True
    )
