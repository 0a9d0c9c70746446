"""Year-labelled items: generation, storage and splitting."""
