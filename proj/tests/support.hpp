#pragma once

#include "hurwitz/sampling.hpp"

namespace hurwitz::test_support {

using hurwitz::Sampler;

} // namespace hurwitz::test_support
