#pragma once

#include <exception>
#include <mutex>

namespace netisac
{

/// Execution policy for the independent per-slot and per-(k,n) kernels. Both
/// policies produce identical results; Serial is the reference.
enum class Exec
{
    Serial,
    Parallel,
};

/// Runs body(i) for i in [0, count). Under Parallel the iterations run on the
/// OpenMP team; the first exception thrown by any iteration is rethrown here.
template <typename Body>
void for_each_index(Exec exec, int count, Body&& body)
{
    if (exec == Exec::Serial || count < 2)
    {
        for (int i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < count; ++i)
    {
        try
        {
            body(i);
        }
        catch (...)
        {
            const std::lock_guard lock(error_mutex);
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace netisac
