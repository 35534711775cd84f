"""Z/2 cup products of binary voxel images via simplified polyhedral surfaces."""

__version__ = "0.1.0"
