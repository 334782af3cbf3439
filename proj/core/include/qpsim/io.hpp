#pragma once

#include <string>

#include "qpsim/engine.hpp"
#include "qpsim/fsm.hpp"
#include "qpsim/markov.hpp"
#include "qpsim/rbm.hpp"
#include "qpsim/stats.hpp"

namespace qpsim {

/// Shortest round-trippable decimal representation (17 significant digits).
std::string format_double(double v);

// CSV bodies. All writers are deterministic: identical inputs give
// byte-identical strings.
std::string trace_to_csv(const Trace& trace);                  // time,source,stream,bit
std::string curve_to_csv(const ActivationCurve& curve);        // p,q
std::string correlation_to_csv(const CorrelationSeries& s);    // lag,r
std::string samples_to_csv(const SampleRecord& record);        // index,time,config-bits

// JSON documents.
std::string fsm_to_json(const FsmSpec& fsm);
FsmSpec fsm_from_json(const std::string& text);

std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

std::string rbm_to_json(const RbmModel& model);
RbmModel rbm_from_json(const std::string& text);

// File helpers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& body);

}  // namespace qpsim
