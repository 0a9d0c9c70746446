"""Date estimation by nearest neighbours over a labelled support set."""
