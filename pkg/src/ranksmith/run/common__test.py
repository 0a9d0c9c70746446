import pytest
from morefs.memory import MemFS

from ranksmith.errors import UsageError
from ranksmith.run.common import prepare_outputs


def test__prepare_outputs__nested_output__parent_created():
    filesystem = MemFS()

    prepare_outputs(filesystem, ["/runs/a/b/model.rsmk"], ["/data.rsft"])

    assert filesystem.isdir("/runs/a/b")


def test__prepare_outputs__output_is_an_input__raises():
    filesystem = MemFS()

    with pytest.raises(UsageError, match="would overwrite /data.rsft"):
        prepare_outputs(filesystem, ["/data.rsft"], ["/data.rsft"])


def test__prepare_outputs__two_outputs_same_file__raises():
    filesystem = MemFS()

    with pytest.raises(UsageError):
        prepare_outputs(filesystem, ["/out/m.rsmk", "/out/m.rsmk"])


def test__prepare_outputs__empty_paths__ignored():
    filesystem = MemFS()

    prepare_outputs(filesystem, ["", "/out/m.rsmk"], ["", "/data.rsft"])

    assert filesystem.isdir("/out")
