#pragma once

#include "mhsteg/bits.hpp"
#include "mhsteg/coder.hpp"
#include "mhsteg/corpus.hpp"
#include "mhsteg/error.hpp"
#include "mhsteg/eval.hpp"
#include "mhsteg/markov.hpp"
#include "mhsteg/stego.hpp"
