"""API key authentication for the experiment HTTP surface."""

import os
import secrets
from typing import Optional

from fastapi import HTTPException, Security, status
from fastapi.security import APIKeyHeader

from app.config import get_logger

logger = get_logger(__name__)

API_KEY_HEADER = APIKeyHeader(name="X-API-Key", auto_error=False)


def get_api_key_from_env() -> Optional[str]:
    """
    Get the API key from the environment at request time.

    Returns:
        Optional[str]: The API key if configured, None otherwise.
    """
    return os.getenv("API_KEY")


async def validate_api_key(api_key: str = Security(API_KEY_HEADER)) -> str:
    """
    Validate the X-API-Key header when an API key is configured.

    Without a configured key the API is open, which is how the lab runs locally.

    Args:
        api_key: The API key from the X-API-Key header.

    Returns:
        str: The validated API key, or "" when none is configured.

    Raises:
        HTTPException: 401 if the key is missing or wrong.
    """
    expected_api_key = get_api_key_from_env()

    if not expected_api_key:
        return ""

    if not api_key or not secrets.compare_digest(api_key, expected_api_key):
        logger.debug("Rejected request with missing or invalid API key")
        raise HTTPException(
            status_code=status.HTTP_401_UNAUTHORIZED,
            detail="A valid X-API-Key header is required.",
            headers={"WWW-Authenticate": "X-API-Key"},
        )

    return api_key
