"""
Monitoring and observability for census runs.

Prometheus counters for census classes, oracle sweeps and verification
suites, structured logging to stderr, and a tracing decorator for the
long-running operations.
"""

import logging
import sys
import time
import uuid
from contextlib import contextmanager
from functools import wraps
from typing import Dict, Iterator

import structlog
from prometheus_client import Counter, Histogram, generate_latest, write_to_textfile
from prometheus_client.registry import CollectorRegistry

logger = structlog.get_logger(__name__)


class MetricsCollector:
    """Prometheus metrics collector for census and oracle runs."""

    def __init__(self):
        self.registry = CollectorRegistry()

        self.census_members = Counter(
            "census_members_total",
            "Members counted per census class",
            ["klass"],
            registry=self.registry,
        )

        self.partition_duration = Histogram(
            "census_partition_duration_seconds",
            "Time spent enumerating one census partition",
            buckets=[0.1, 1.0, 5.0, 15.0, 60.0, 300.0],
            registry=self.registry,
        )

        self.oracle_discriminants = Counter(
            "oracle_discriminants_total",
            "Discriminants whose class group was computed",
            registry=self.registry,
        )

        self.oracle_mismatches = Counter(
            "oracle_mismatches_total",
            "Disagreements between genus criteria and class groups",
            registry=self.registry,
        )

        self.verification_checks = Counter(
            "verification_checks_total",
            "Verification checks by suite and outcome",
            ["suite", "status"],
            registry=self.registry,
        )

        self.errors_total = Counter(
            "errors_total",
            "Total number of errors",
            ["error_type", "component"],
            registry=self.registry,
        )

    def record_census_counts(self, counts: Dict[str, int]):
        for klass, value in counts.items():
            self.census_members.labels(klass=klass).inc(value)

    def record_partition_duration(self, duration: float):
        self.partition_duration.observe(duration)

    def record_oracle(self, discriminants: int, mismatches: int):
        self.oracle_discriminants.inc(discriminants)
        self.oracle_mismatches.inc(mismatches)

    def record_verification(self, suite: str, passed: int, failed: int):
        self.verification_checks.labels(suite=suite, status="passed").inc(passed)
        self.verification_checks.labels(suite=suite, status="failed").inc(failed)

    def record_error(self, error_type: str, component: str):
        self.errors_total.labels(error_type=error_type, component=component).inc()

    def get_metrics(self) -> str:
        """Get Prometheus metrics as string."""
        return generate_latest(self.registry).decode("utf-8")

    def write_textfile(self, path: str):
        """Write the exposition for a node-exporter textfile collector."""
        write_to_textfile(path, self.registry)


def setup_structured_logging(level: str = "INFO", fmt: str = "json"):
    """Route structlog through stdlib logging on stderr; stdout carries command output."""
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.INFO),
        force=True,
    )
    renderer = (
        structlog.processors.JSONRenderer()
        if fmt == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def trace_function(operation_name: str):
    """Decorator to trace function execution."""

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            with trace_operation(operation_name):
                return func(*args, **kwargs)

        return wrapper

    return decorator


@contextmanager
def trace_operation(operation_name: str, **tags) -> Iterator[str]:
    """Log Starting/Completed/Failed around a block, sharing one trace id."""
    trace_id = str(uuid.uuid4())
    start_time = time.time()

    logger.info(
        f"Starting {operation_name}",
        trace_id=trace_id,
        operation=operation_name,
        **tags,
    )

    try:
        yield trace_id
    except Exception as e:
        duration = time.time() - start_time
        logger.error(
            f"Failed {operation_name}",
            trace_id=trace_id,
            operation=operation_name,
            duration=duration,
            error=str(e),
            status="error",
            **tags,
        )
        metrics.record_error(error_type=type(e).__name__, component=operation_name)
        raise
    else:
        duration = time.time() - start_time
        logger.info(
            f"Completed {operation_name}",
            trace_id=trace_id,
            operation=operation_name,
            duration=duration,
            status="success",
            **tags,
        )


metrics = MetricsCollector()


def get_metrics() -> str:
    return metrics.get_metrics()
