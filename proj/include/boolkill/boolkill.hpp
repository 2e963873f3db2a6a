#pragma once

#include "boolkill/builder.hpp"
#include "boolkill/commands.hpp"
#include "boolkill/curriculum.hpp"
#include "boolkill/error.hpp"
#include "boolkill/evalkit.hpp"
#include "boolkill/ingest.hpp"
#include "boolkill/io.hpp"
#include "boolkill/logic.hpp"
#include "boolkill/random.hpp"
#include "boolkill/records.hpp"
#include "boolkill/text.hpp"
