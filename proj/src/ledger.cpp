#include "gnnbench/ledger.hpp"

#include <algorithm>
#include <cstdlib>

namespace gnnbench {

void MemoryLedger::track_alloc(std::size_t bytes, std::string_view label, BufferClass cls) {
    if (budget_ && current_ + bytes > *budget_) {
        throw BudgetExceeded(bytes, current_, *budget_);
    }
    current_ += bytes;
    peak_ = std::max(peak_, current_);
    if (cls == BufferClass::Transient) {
        transient_current_ += bytes;
        transient_peak_ = std::max(transient_peak_, transient_current_);
    }
    if (logging_) {
        event_log_.push_back({true, bytes, std::string(label)});
    }
}

void MemoryLedger::track_free(std::size_t bytes, std::string_view label, BufferClass cls) {
    // Mismatched frees are logic errors; fail loudly in every build mode.
    if (bytes > current_) {
        std::abort();
    }
    current_ -= bytes;
    if (cls == BufferClass::Transient) {
        if (bytes > transient_current_) {
            std::abort();
        }
        transient_current_ -= bytes;
    }
    if (logging_) {
        event_log_.push_back({false, bytes, std::string(label)});
    }
}

void MemoryLedger::write_event_log(std::ostream& os) const {
    for (const Event& e : event_log_) {
        os << (e.is_alloc ? "alloc " : "free ") << e.bytes << ' ' << e.label << '\n';
    }
}

std::optional<std::size_t> plan_chunk_width(std::size_t budget_bytes,
                                            std::size_t num_edges,
                                            std::size_t feature_width,
                                            std::size_t bytes_per_elem,
                                            std::size_t fixed_overhead_bytes) {
    if (budget_bytes <= fixed_overhead_bytes) {
        return std::nullopt;
    }
    std::size_t available = budget_bytes - fixed_overhead_bytes;
    std::size_t per_column = num_edges * bytes_per_elem;
    if (per_column == 0) {
        return feature_width;  // no edges: any width fits
    }
    std::size_t width = std::min(feature_width, available / per_column);
    if (width < 1) {
        return std::nullopt;
    }
    return width;
}

} // namespace gnnbench
