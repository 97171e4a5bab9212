import os
from uuid import uuid4

from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

from stable_pieces.glmodel import ModelConfig, brute_force_partition
from stable_pieces.pieces import PieceEnumerator
from stable_pieces.weyl import build_weyl
from stable_pieces.wonderful import build_atlas

if os.environ.get("OTLP_ENDPOINT"):
    resource = Resource(
        attributes={
            "service.name": "stable_pieces",
            "service.namespace": "demo",
            "service.instance.id": str(uuid4()),
        }
    )
    trace.set_tracer_provider(TracerProvider(resource=resource))
    otlp_exporter = OTLPSpanExporter(endpoint=os.environ["OTLP_ENDPOINT"], insecure=True)
    trace.get_tracer_provider().add_span_processor(BatchSpanProcessor(otlp_exporter))


a2 = build_weyl("A2")
checks = PieceEnumerator(a2).sweep()
print(f"A2: {sum(c.holds for c in checks)}/{len(checks)} twisted pairs satisfy the Poincare identity")

atlas = build_atlas(a2)
for row in atlas.rows:
    print(row.to_csv_row())
print(f"total = {atlas.total}")

result = brute_force_partition(ModelConfig(mode="hyperplane_dual", d=3, q=2))
for bucket in result.buckets:
    print(bucket.signature_text, bucket.size, bucket.predicted)
print(f"verdict: {result.verdict}")
