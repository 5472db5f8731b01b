"""
Spacing Clust - Size-Constrained Separation Clustering

Single-linkage based algorithms that maximize the minimum spacing and the
spacing spanning-tree weight of a clustering while every group keeps a
minimum number of points, with a brute-force oracle and an experimental
protocol against k-means.
"""

__version__ = "1.0.0"
