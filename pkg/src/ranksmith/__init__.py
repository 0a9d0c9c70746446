"""Differentiable ranking objectives and k-NN date estimation over learned embeddings."""
