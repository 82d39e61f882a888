"""Definition files, query dispatch and certificates."""

from .main import main
from .queries import HashMismatch, QueryError, QueryResult, certificate_for, run_query, verify_certificate
from .registry import Registry, instance_hash, parse_definition, serialize
from .syntax import DefinitionError

__all__ = ["main", "HashMismatch", "QueryError", "QueryResult", "certificate_for", "run_query",
           "verify_certificate", "Registry", "instance_hash", "parse_definition", "serialize",
           "DefinitionError"]
