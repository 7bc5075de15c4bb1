#!/usr/bin/env python3

import glob
import logging
import os
from collections import Counter
from typing import Optional

from errors import RegistryError
from helpers import provenance_sort_key, section_of
from identity_parser import parse_identities
from models import Identity, RegistryManifest
from validator import fold_constants, require_valid

logger = logging.getLogger(__name__)

IDENTITY_FILE_PATTERN = "*.idt"


def read_identity_file(path: str) -> list[Identity]:
    """
    Parse and validate every identity in one file.

    Args:
        path: Path to an .idt file

    Returns:
        Validated identities in file order, both sides constant-folded

    Raises:
        OSError: If the file cannot be read
        DSLError: On lexical, syntax or validation errors (with file:line:col)
    """
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    identities = parse_identities(text, path)
    for identity in identities:
        require_valid(identity)
        identity.lhs = fold_constants(identity.lhs)
        identity.rhs = fold_constants(identity.rhs)
    logger.debug(f"Loaded {len(identities)} identities from {path}")
    return identities


def load_registry(path: str, ids: Optional[list[str]] = None) -> RegistryManifest:
    """
    Load every identity file in a registry directory.

    Args:
        path: Directory holding *.idt files (a single file is accepted too)
        ids: Optional identity ids to keep; unknown ids are an error

    Returns:
        RegistryManifest ordered by provenance

    Raises:
        RegistryError: No identity files, duplicate ids or provenances, unknown ids
        DSLError: If any file fails to parse or validate
    """
    if os.path.isfile(path):
        files = [path]
    else:
        files = sorted(glob.glob(os.path.join(path, IDENTITY_FILE_PATTERN)))
    if not files:
        raise RegistryError(f"no identity files found in {path}")

    entries: list[Identity] = []
    sources: dict[str, str] = {}
    provenances: dict[str, str] = {}
    try:
        for file in files:
            for identity in read_identity_file(file):
                if identity.id in sources:
                    raise RegistryError(
                        f"duplicate identity id {identity.id!r} in {sources[identity.id]} and {file}"
                    )
                if identity.provenance and identity.provenance in provenances:
                    raise RegistryError(
                        f"duplicate provenance {identity.provenance!r} for {provenances[identity.provenance]!r} "
                        f"and {identity.id!r}"
                    )
                sources[identity.id] = file
                if identity.provenance:
                    provenances[identity.provenance] = identity.id
                entries.append(identity)
    except Exception as e:
        logger.error(f"Failed to load registry from {path}: {e}")
        raise

    if ids:
        unknown = sorted(set(ids) - set(sources))
        if unknown:
            raise RegistryError(f"unknown identity ids: {', '.join(unknown)}")
        entries = [entry for entry in entries if entry.id in set(ids)]

    entries.sort(key=lambda entry: (provenance_sort_key(entry.provenance), entry.id))
    counts = Counter(section_of(entry.provenance) for entry in entries)
    manifest = RegistryManifest(entries=entries, counts_by_section=dict(sorted(counts.items())), sources=sources)
    logger.info(f"Loaded {len(entries)} identities ({manifest.sample_count} sample points) from {len(files)} file(s)")
    return manifest


def filter_section(manifest: RegistryManifest, section: str) -> list[Identity]:
    """Entries whose provenance lies in the given section (e.g. "S4.1")."""
    return [entry for entry in manifest.entries if section_of(entry.provenance) == section]
