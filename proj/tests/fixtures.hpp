#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ivcut/graph.hpp"

#ifndef IVCUT_FIXTURE_DIR
#error "IVCUT_FIXTURE_DIR must point at tests/fixtures"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(IVCUT_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ivcut::MixedGraph load_fixture(const std::string& name) { return ivcut::parse_graph(read_fixture(name)); }
