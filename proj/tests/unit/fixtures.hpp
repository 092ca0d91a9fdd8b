#pragma once

#include "g2patch/geometry.hpp"

#include <cstdlib>
#include <string>

inline std::string fixture_path(const std::string& name) {
    const char* dir = std::getenv("G2PATCH_DATA");
    return std::string(dir ? dir : G2PATCH_TEST_DATA) + "/" + name + ".json";
}

inline g2patch::MultiPatchDomain fixture(const std::string& name) {
    return g2patch::load_domain_file(fixture_path(name));
}
