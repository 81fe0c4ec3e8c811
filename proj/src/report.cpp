#include "atr/report.hpp"

#include "atr/errors.hpp"

namespace atr {

const char* phase_name(Phase p)
{
    switch (p) {
    case Phase::global: return "Global";
    case Phase::direct_accept: return "DirectAccept";
    case Phase::diving: return "Diving";
    case Phase::bisection: return "Bisection";
    }
    return "Global";
}

Phase phase_from_name(const std::string& name)
{
    if (name == "Global") return Phase::global;
    if (name == "DirectAccept") return Phase::direct_accept;
    if (name == "Diving") return Phase::diving;
    if (name == "Bisection") return Phase::bisection;
    throw Error("unknown phase name: " + name);
}

const char* stop_reason_name(StopReason r)
{
    switch (r) {
    case StopReason::grad_tol: return "GradTol";
    case StopReason::early_terminate: return "EarlyTerminate";
    case StopReason::max_iterations: return "MaxIterations";
    case StopReason::error: return "Error";
    }
    return "Error";
}

}  // namespace atr
