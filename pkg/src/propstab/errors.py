"""Exception types shared across the package."""

from __future__ import annotations


class PropstabError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(PropstabError):
    """Matrix or signal dimensions are inconsistent."""


class SingularAtS(PropstabError):
    """The resolvent (sI - A) is numerically singular at the requested point."""


class NotSISO(PropstabError):
    """Operation requires a single-input single-output subsystem."""


class NotSeparating(PropstabError):
    """Candidate cutset does not separate the source from the far side."""


class GraphTooLarge(PropstabError):
    """Exhaustive cutset enumeration refused beyond the vertex cap."""


class Unreachable(PropstabError):
    """Target vertex has no directed path from the source."""


class NoIncomingEdges(PropstabError):
    """Vertex has no incoming edges, so it closes no feedback loop."""


class UnstableLoop(PropstabError):
    """Closed local feedback loop is not asymptotically stable."""


class NotPlanarTemplate(PropstabError):
    """Subsystem does not match the double-integrator-with-damping template."""


class NotStronglyConnected(PropstabError):
    """Vertex region is not strongly connected in the induced subgraph."""


class SourceVertex(PropstabError):
    """Operation is undefined at the disturbance source vertex."""


class StepTooLarge(PropstabError):
    """Simulation step is too coarse for the stacked system dynamics."""


class SchemaError(PropstabError):
    """Network description file violates the JSON schema."""


class NonPositiveWeight(SchemaError):
    """Edge weights must be strictly positive."""


class SelfLoop(SchemaError):
    """Self-coupling edges are not part of the model."""
