"""
Command modules; importing them registers their verb handlers
"""
from . import extract, generate, pipeline, topology, verify

ALL_COMMANDS = [
    extract.extract_delta,
    extract.extract_double_delta,
    verify.verify,
    topology.centered,
    topology.property_,
    pipeline.pipeline,
    generate.gen,
]
