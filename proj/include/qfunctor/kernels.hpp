// OpenMP-parallel hot loops and the serial reference versions they are
// tested against. Parallel versions are the defaults used elsewhere.
#pragma once

#include "qfunctor/hilbmod.hpp"
#include "qfunctor/moyal.hpp"
#include "qfunctor/strictfield.hpp"

namespace qf {

/// interior_tensor with every assembly loop run on one thread.
HilbertBimodule interior_tensor_serial(const HilbertBimodule& e, const HilbertBimodule& f);

/// Series star product, one hbar coefficient at a time.
FormalSeries star_serial(const FormalSeries& f, const FormalSeries& g);

std::vector<DefectRow> defect_sweep_serial(const TrigPoly& f, const TrigPoly& g, const std::vector<int>& qs);
std::vector<NormSample> norm_section_serial(const TrigPoly& f, const std::vector<int>& qs);

}  // namespace qf
