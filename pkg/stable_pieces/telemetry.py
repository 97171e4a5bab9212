import logging
import os
from uuid import uuid4

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor
from rich.console import Console
from rich.logging import RichHandler

OTLP_ENV = "OTLP_ENDPOINT"


def setup_logging(verbose: bool = False) -> None:
    """Log records go to stderr so stdout stays a clean report."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=verbose)],
        force=True,
    )


def setup_tracing(namespace: str) -> TracerProvider | None:
    """Export spans over OTLP when OTLP_ENDPOINT is set; otherwise spans stay no-ops."""
    endpoint = os.environ.get(OTLP_ENV)
    if not endpoint:
        return None
    from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter

    resource = Resource(
        attributes={
            "service.name": "stable_pieces",
            "service.namespace": namespace,
            "service.instance.id": str(uuid4()),
        }
    )
    provider = TracerProvider(resource=resource)
    provider.add_span_processor(BatchSpanProcessor(OTLPSpanExporter(endpoint=endpoint, insecure=True)))
    trace.set_tracer_provider(provider)
    return provider
