from typing import Any

from fastapi import APIRouter, BackgroundTasks, Body, HTTPException, status
from fastapi.responses import JSONResponse

from app.config import get_logger
from app.config.presets import preset
from app.errors import ConfigError, LabError, UnknownPreset
from app.models.experiment import (
    ExperimentConfig,
    ExperimentResponse,
    ExperimentStatus,
    ExperimentStatusResponse,
)
from app.services.experiment_service import ExperimentService
from app.services.report_service import parse_config

logger = get_logger(__name__)

router = APIRouter()
experiment_service = ExperimentService()


def _rejection(message: str) -> JSONResponse:
    error_response = ExperimentResponse(
        status=ExperimentStatus.FAILED, success=False, message=message
    )
    return JSONResponse(
        content=error_response.model_dump(mode="json", exclude_none=True),
        status_code=status.HTTP_422_UNPROCESSABLE_CONTENT,
    )


@router.post(
    "/experiments/run/sync",
    summary="Run an experiment ensemble",
    response_model=ExperimentResponse,
    responses={status.HTTP_422_UNPROCESSABLE_CONTENT: {"model": ExperimentResponse}},
    response_model_exclude_none=True,
)
async def run_experiment_sync(
    document: dict[str, Any] = Body(..., description="Experiment configuration"),
) -> ExperimentResponse | JSONResponse:
    """
    Validate an experiment configuration and run its ensemble to completion.

    Member failures do not fail the request; they appear as runs with an error.

    Args:
        document (dict): The experiment configuration document.

    Returns:
        ExperimentResponse: The ensemble summary, or an error response with success=False.
    """
    try:
        cfg = parse_config(document)
    except ConfigError as e:
        logger.info(f"Rejected experiment configuration: {e}")
        return _rejection(str(e))

    try:
        return experiment_service.process_experiment_sync(cfg)
    except LabError as e:
        return _rejection(f"{type(e).__name__}: {e}")
    except Exception as e:
        logger.error(f"Experiment processing failed: {str(e)}", exc_info=True)
        return _rejection(experiment_service.build_error_response().message)


@router.post(
    "/experiments/run/async",
    summary="Run an experiment ensemble in the background",
    response_model=ExperimentStatusResponse,
    status_code=status.HTTP_202_ACCEPTED,
    responses={status.HTTP_422_UNPROCESSABLE_CONTENT: {"model": ExperimentResponse}},
    response_model_exclude_none=True,
)
async def run_experiment_async(
    background_tasks: BackgroundTasks,
    document: dict[str, Any] = Body(..., description="Experiment configuration"),
) -> ExperimentStatusResponse | JSONResponse:
    """
    Submit an experiment to run in the background.

    Args:
        background_tasks (BackgroundTasks): FastAPI BackgroundTasks for async processing.
        document (dict): The experiment configuration document.

    Returns:
        ExperimentStatusResponse: Contains the experiment id and initial status (IN_PROGRESS)
    """
    try:
        cfg = parse_config(document)
    except ConfigError as e:
        return _rejection(str(e))

    experiment_id = experiment_service.create_experiment()
    background_tasks.add_task(
        experiment_service.process_experiment_async, experiment_id, cfg
    )

    logger.info(f"Experiment {experiment_id} submitted for async processing")

    return ExperimentStatusResponse(
        id=experiment_id, status=ExperimentStatus.IN_PROGRESS
    )


@router.get(
    "/experiments/{experiment_id}",
    summary="Get experiment status and results",
    response_model=ExperimentResponse,
    responses={
        status.HTTP_404_NOT_FOUND: {"description": "Experiment not found"},
        status.HTTP_200_OK: {"model": ExperimentResponse},
    },
    response_model_exclude_none=True,
)
async def get_experiment_details(experiment_id: str) -> ExperimentResponse:
    """
    Retrieve the status and results of an experiment by its ID.

    Raises:
        HTTPException: 404 if the experiment is not found
    """
    experiment_info = experiment_service.get_experiment(experiment_id)

    if not experiment_info:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Experiment {experiment_id} not found",
        )

    if experiment_info.status == ExperimentStatus.IN_PROGRESS:
        return ExperimentResponse(
            id=experiment_id,
            status=ExperimentStatus.IN_PROGRESS,
            success=True,
            message="Experiment is still running. Please check back later for results.",
        )

    if experiment_info.response:
        return experiment_info.response

    return ExperimentResponse(
        id=experiment_id,
        status=experiment_info.status,
        success=False,
        message=f"Experiment is {experiment_info.status.value}. No results available",
    )


@router.get(
    "/presets/{name}",
    summary="Get a calibrated preset configuration",
    response_model=ExperimentConfig,
    responses={status.HTTP_404_NOT_FOUND: {"description": "Preset not found"}},
)
async def get_preset(name: str) -> ExperimentConfig:
    """Return the calibrated experiment configuration of a scenario class."""
    try:
        return preset(name)
    except UnknownPreset as e:
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(e))
