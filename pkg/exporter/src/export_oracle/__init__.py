"""Offline tooling for the le2e engine: checkpoint export and golden fixtures.

Two jobs live here. `export_checkpoint` converts a torch checkpoint into the
v1 binary weight format the engine loads, fusing weight-norm and renaming
tensors along the way. `generate_fixtures` produces golden reference
tensors, WAVs, and loss values from deliberately naive oracle code, for the
engine's test suite to replay.

Nothing in this package imports the engine; the two sides meet only at the
v1 file format, the fixture directory layout, and the engine CLI.
"""

from .export import ExportError, ExportManifest, export_checkpoint
from .fixtures import GoldenFixture, generate_fixtures
from .mapping import DEFAULT_MAPPING, MapRule, fuse_weight_norm
from .v1format import read_tensors, write_tensors

__version__ = "0.1.0"
