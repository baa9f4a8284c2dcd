#ifndef EXPCERT_SRC_FORK_HPP
#define EXPCERT_SRC_FORK_HPP

#include <atomic>
#include <future>
#include <utility>

namespace expcert::detail
{

// Caps the number of extra threads spawned by recursive fork/join.
class ForkBudget
{
public:
    explicit ForkBudget(unsigned jobs) : slots_(jobs > 1 ? static_cast<int>(jobs) - 1 : 0) {}

    bool try_acquire() noexcept
    {
        int n = slots_.load(std::memory_order_relaxed);
        while (n > 0) {
            if (slots_.compare_exchange_weak(n, n - 1, std::memory_order_acq_rel)) {
                return true;
            }
        }
        return false;
    }

    void release() noexcept { slots_.fetch_add(1, std::memory_order_acq_rel); }

private:
    std::atomic<int> slots_;
};

// Runs `left` on a new thread and `right` on the caller when the budget
// allows. Returns false without running either when no slot is free.
template <typename Left, typename Right>
bool try_fork_join(ForkBudget &budget, Left &left_result, Right &right_result, auto &&left, auto &&right)
{
    if (!budget.try_acquire()) {
        return false;
    }
    struct Guard {
        ForkBudget &b;
        ~Guard() { b.release(); }
    } guard{budget};
    auto fut = std::async(std::launch::async, std::forward<decltype(left)>(left));
    right_result = right();
    left_result = fut.get();
    return true;
}

} // namespace expcert::detail

#endif
