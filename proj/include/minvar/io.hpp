#pragma once

#include "minvar/io/commands.hpp"
#include "minvar/io/config.hpp"
#include "minvar/io/csv.hpp"
#include "minvar/io/json.hpp"
#include "minvar/io/mesh.hpp"
