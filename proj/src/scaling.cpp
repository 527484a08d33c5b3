#include "geomds/scaling.hpp"

namespace geomds {

DistanceColumns cos_transform(const SampleSet& samples, double r)
{
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "sphere radius must be positive");
    return {(samples.F.array() / r).cos().matrix(), samples.indices, Metric::Cosine};
}

} // namespace geomds
