#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gnnbench/error.hpp"

namespace gnnbench {

/// Buffer classes for ledger accounting. Transient marks the short-lived
/// per-chunk message buffers whose peak the chunk-width planner bounds;
/// everything else (outputs, features, graph arrays) is Persistent.
enum class BufferClass { Persistent, Transient };

/// Exact byte accounting for every buffer the engine registers, with an
/// optional hard budget. Exceeding the budget raises BudgetExceeded and
/// leaves the ledger unchanged, so an out-of-memory outcome is a
/// deterministic, recoverable event rather than a crash.
///
/// A ledger belongs to a single run and a single thread.
class MemoryLedger {
public:
    struct Event {
        bool is_alloc;
        std::size_t bytes;
        std::string label;
    };

    MemoryLedger() = default;
    explicit MemoryLedger(std::size_t budget_bytes) : budget_(budget_bytes) {}

    void set_budget(std::size_t bytes) { budget_ = bytes; }
    void clear_budget() { budget_.reset(); }
    std::optional<std::size_t> budget_bytes() const { return budget_; }

    void enable_event_log(bool on = true) { logging_ = on; }

    /// Registers an allocation. Throws BudgetExceeded if the budget would
    /// be crossed; state is unchanged in that case.
    void track_alloc(std::size_t bytes, std::string_view label,
                     BufferClass cls = BufferClass::Persistent);

    /// Registers a release. bytes must not exceed the class's live total;
    /// a mismatched free is a logic error and asserts.
    void track_free(std::size_t bytes, std::string_view label,
                    BufferClass cls = BufferClass::Persistent);

    std::size_t current_bytes() const { return current_; }
    std::size_t peak_bytes() const { return peak_; }
    std::size_t transient_current_bytes() const { return transient_current_; }
    std::size_t transient_peak_bytes() const { return transient_peak_; }

    const std::vector<Event>& events() const { return event_log_; }

    /// Writes the event log as "<alloc|free> <bytes> <label>" lines.
    void write_event_log(std::ostream& os) const;

private:
    std::size_t current_ = 0;
    std::size_t peak_ = 0;
    std::size_t transient_current_ = 0;
    std::size_t transient_peak_ = 0;
    std::optional<std::size_t> budget_;
    bool logging_ = false;
    std::vector<Event> event_log_;
};

/// RAII registration of one buffer with a ledger. Move-only; the ledger
/// must outlive the reservation.
class LedgerReservation {
public:
    LedgerReservation() = default;

    LedgerReservation(MemoryLedger& ledger, std::size_t bytes, std::string_view label,
                      BufferClass cls = BufferClass::Persistent)
        : ledger_(&ledger), bytes_(bytes), label_(label), cls_(cls) {
        ledger.track_alloc(bytes, label, cls);
    }

    ~LedgerReservation() { release(); }

    LedgerReservation(LedgerReservation&& other) noexcept { swap(other); }
    LedgerReservation& operator=(LedgerReservation&& other) noexcept {
        release();
        swap(other);
        return *this;
    }
    LedgerReservation(const LedgerReservation&) = delete;
    LedgerReservation& operator=(const LedgerReservation&) = delete;

    void release() {
        if (ledger_ != nullptr) {
            ledger_->track_free(bytes_, label_, cls_);
            ledger_ = nullptr;
        }
    }

    std::size_t bytes() const { return bytes_; }

private:
    void swap(LedgerReservation& other) noexcept {
        std::swap(ledger_, other.ledger_);
        std::swap(bytes_, other.bytes_);
        std::swap(label_, other.label_);
        std::swap(cls_, other.cls_);
    }

    MemoryLedger* ledger_ = nullptr;
    std::size_t bytes_ = 0;
    std::string label_;
    BufferClass cls_ = BufferClass::Persistent;
};

/// Widest chunk width whose per-chunk message buffer (E * bytes_per_elem
/// per column) still fits in budget_bytes after fixed_overhead_bytes is
/// set aside. Returns nullopt when not even width 1 fits, i.e. no
/// decomposition rescues the configuration.
std::optional<std::size_t> plan_chunk_width(std::size_t budget_bytes,
                                            std::size_t num_edges,
                                            std::size_t feature_width,
                                            std::size_t bytes_per_elem,
                                            std::size_t fixed_overhead_bytes);

} // namespace gnnbench
