"""Generate a synthetic feature file."""

from __future__ import annotations

from typing import TYPE_CHECKING

from dependency_injector.wiring import Provide, inject

from ranksmith.data.feature_storage import FeatureStorage
from ranksmith.data.synthetic import SyntheticSpec, generate
from ranksmith.run.common import prepare_outputs, print_metrics
from ranksmith.setup.dependency_injection import RanksmithContainer

if TYPE_CHECKING:
    from fsspec import AbstractFileSystem


@inject
def run(
    spec: SyntheticSpec = Provide[RanksmithContainer.synthetic_spec],
    storage: FeatureStorage = Provide[RanksmithContainer.feature_storage],
    filesystem: AbstractFileSystem = Provide[RanksmithContainer.filesystem],
    out: str = Provide[RanksmithContainer.config.out],
    file_format: str = Provide[RanksmithContainer.config.format],
) -> None:
    """Generate the dataset and write it in the requested format."""
    prepare_outputs(filesystem, [out])
    items = generate(spec)
    if file_format == "csv":
        storage.save_csv(items, out)
    else:
        storage.save(items, out)
    print_metrics({"items": len(items), "d_in": items.dim, "out": out})
