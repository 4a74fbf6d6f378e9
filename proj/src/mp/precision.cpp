#include "hopfsplit/mp/precision.hpp"

namespace hopfsplit {

PrecisionContext make_context(std::optional<double> epsilon, double safety, long min_bits) {
    if (safety < 1.0) throw ParameterError("make_context: safety factor must be >= 1");
    PrecisionContext ctx;
    ctx.safety_factor = safety;
    long bits = min_bits > 64 ? min_bits : 64;
    if (epsilon) {
        if (*epsilon <= 0.0 || *epsilon >= 1.0)
            throw ParameterError("make_context: epsilon must lie in (0,1)");
        constexpr prec_t work = 256;
        Real e = Real::of(*epsilon, work);
        Real needed = ceil(Real::pi(work) / (2 * e) * Real::log2e(work));
        // safety factors are small rationals; the product stays exactly
        // representable at the working precision
        long derived = (ceil(needed * Real::of(safety, work))).to_long() + 128;
        if (derived > bits) bits = derived;
        ctx.derived_for_epsilon = *epsilon;
    }
    ctx.bits = static_cast<prec_t>(bits);
    return ctx;
}

} // namespace hopfsplit
