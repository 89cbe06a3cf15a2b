# Group analogous releases with k-means; silhouette picks the cluster count.
#
# Run: python demos/03_release_clustering.py

import numpy as np

from swphm import SimConfig, assign_cluster, choose_k, cluster_releases, generate_dataset
from swphm.clustering import dataset_features, kmeans_fit, mean_silhouette
from swphm.pipeline import weigh_dataset

# plain vectors first: two planted blobs, silhouette finds k=2
rng = np.random.default_rng(0)
blob_a = rng.normal((0, 0), 1.0, size=(12, 2))
blob_b = rng.normal((12, 12), 1.0, size=(12, 2))
points = np.vstack([blob_a, blob_b])
k = choose_k(points, k_max=6, seed=0)
fit = kmeans_fit(points, k, seed=0)
print(f"planted 2 blobs -> choose_k={k}, inertia={fit.inertia:.1f}, "
      f"silhouette={mean_silhouette(points, fit.labels):.3f}")

# now real release feature vectors from a simulated history
dataset, _ = generate_dataset(SimConfig(n_releases=12, seed=5, noise_std_ms=30.0))
weighted = weigh_dataset(dataset)
versions, features = dataset_features(dataset, weighted)
print(f"\nrelease features: {features.shape[1]} dimensions "
      "(kind counts, severity counts, total |WF|, item count)")

model = cluster_releases(dataset, weighted, seed=0)
print(f"clustered {len(versions)} releases into k={model.k}:")
for version in versions:
    print(f"  {version} -> cluster {model.assignments[version]}")

# a new release joins its nearest cluster
new_release_features = features[-1] * 1.1
print(f"\nnew release -> cluster {assign_cluster(model, new_release_features)}")
