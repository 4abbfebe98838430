from __future__ import annotations

from pathlib import Path

import pytest

from concord.index import CorpusReader, build_postings, encode

MINI_VRT = """<text id="t1" century="16">
<s>
isso\tP\tisso
e\tPREP\te
isso\tP\tisso
</s>
<s>
casa\tNOM\tcasa
isso\tP\tisso
</s>
</text>
<text id="t2" century="17">
<s>
isso\tP\tisso
vai\tV\tir
</s>
</text>
"""


@pytest.fixture
def mini_vrt() -> str:
    return MINI_VRT


def encode_text(tmp_path: Path, vrt_text: str, name: str = "MINI",
                postings: bool = True) -> CorpusReader:
    """Encode VRT text into tmp_path/{data,registry} and open a reader."""
    tmp_path.mkdir(parents=True, exist_ok=True)
    vrt_file = tmp_path / f"{name.lower()}.vrt"
    vrt_file.write_text(vrt_text, encoding="utf-8")
    corpus = encode(
        vrt_file,
        data_dir=tmp_path / "data",
        registry_dir=tmp_path / "registry",
        positional_attrs=("pos", "lemma"),
        structural_attrs=("s",),
        name=name,
        force=True,
    )
    if postings:
        build_postings(corpus, registry_dir=tmp_path / "registry")
    return CorpusReader.open(corpus, tmp_path / "registry")


@pytest.fixture
def mini_reader(tmp_path: Path) -> CorpusReader:
    return encode_text(tmp_path, MINI_VRT)
