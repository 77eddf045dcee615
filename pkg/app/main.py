from contextlib import asynccontextmanager

from dotenv import load_dotenv
from fastapi import Depends, FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.config import get_logger, settings, setup_logging
from app.routers import experiment_router
from app.utils import validate_api_key

load_dotenv()
setup_logging()

logger = get_logger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    logger.info("MPTCP stability lab API starting up...")
    yield
    # Shutdown
    logger.info("MPTCP stability lab API shutting down...")


app = FastAPI(
    title="MPTCP Stability Lab API",
    description="Run fluid-model multipath congestion control stability experiments",
    version="1.0.0",
    lifespan=lifespan,
)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(
    experiment_router.router,
    prefix="/api",
    tags=["experiment"],
    dependencies=[Depends(validate_api_key)],
)


@app.get("/health", dependencies=[])
async def health_check():
    """Health check endpoint - publicly accessible without authentication."""
    return {"status": "healthy"}
