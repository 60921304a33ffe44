"""Instance files, bundled corpus, disk cache and the command line interface."""
from .cache import DiskCache, content_key
from .cli import Options, canonical_json, main, render_text, run
from .instance import (Instance, InstanceError, bundled_instances, corpus_path, emit_instance,
                       instance_from_dict, parse_instance)
