#pragma once

#include "dampo/bath.hpp"
#include "dampo/dynamics.hpp"
#include "dampo/errors.hpp"
#include "dampo/fano.hpp"
#include "dampo/io.hpp"
#include "dampo/oracle.hpp"
#include "dampo/spectral.hpp"
#include "dampo/states.hpp"
