"""
Tracing for long computations.

Sweeps (sieving, histograms, verification suites) run inside OpenTelemetry
spans. Without a configured provider the spans are no-ops; with
``CMLT_ENABLE_TRACING=true`` a console exporter is installed and span
durations are also logged.
"""

import time
from contextlib import contextmanager
from functools import wraps
from typing import Any, Callable, Dict, Optional

from opentelemetry import trace
from opentelemetry.trace import Status, StatusCode

from cmlt.core.config import get_settings
from cmlt.core.logger import get_logger

logger = get_logger(__name__)

tracer = trace.get_tracer(__name__)

_initialized = False


def initialize_observability() -> None:
    """Install a console span exporter when tracing is enabled."""
    global _initialized
    if _initialized or not get_settings().enable_tracing:
        return
    try:
        from opentelemetry.sdk.resources import SERVICE_NAME, Resource
        from opentelemetry.sdk.trace import TracerProvider
        from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor
    except ImportError as e:
        logger.warning(f"Tracing requested but the OpenTelemetry SDK is unavailable: {e}")
        return

    provider = TracerProvider(resource=Resource(attributes={SERVICE_NAME: "cmlt"}))
    provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
    trace.set_tracer_provider(provider)
    _initialized = True
    logger.info("Tracing initialized with console exporter")


@contextmanager
def traced(operation_name: str, attributes: Optional[Dict[str, Any]] = None):
    """
    Context manager wrapping a computation in a span.

    Usage:
        with traced("sieve.count", {"hi": hi}):
            ...
    """
    with tracer.start_as_current_span(operation_name) as span:
        start_time = time.time()
        for key, value in (attributes or {}).items():
            span.set_attribute(key, value)
        try:
            yield span
            span.set_status(Status(StatusCode.OK))
        except Exception as e:
            span.set_status(Status(StatusCode.ERROR, str(e)))
            span.record_exception(e)
            raise
        finally:
            duration_ms = (time.time() - start_time) * 1000
            span.set_attribute("duration_ms", duration_ms)
            if get_settings().enable_tracing:
                logger.info(f"{operation_name} finished in {duration_ms:.1f} ms")


def traced_call(operation_name: Optional[str] = None) -> Callable:
    """Decorator form of ``traced``."""

    def decorator(func: Callable) -> Callable:
        name = operation_name or f"{func.__module__}.{func.__qualname__}"

        @wraps(func)
        def wrapper(*args, **kwargs):
            with traced(name):
                return func(*args, **kwargs)

        return wrapper

    return decorator
