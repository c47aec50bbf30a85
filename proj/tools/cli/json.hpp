#pragma once

#ifdef SYMM_VENDORED_JSON
#include "json.hpp"
#else
#include <nlohmann/json.hpp>
#endif
