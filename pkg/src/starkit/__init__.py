"""Stars, extreme points and kernels of geodesic polygons on the Euclidean and hyperbolic planes."""
