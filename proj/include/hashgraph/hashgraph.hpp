#pragma once

#include <hashgraph/baselines.hpp>
#include <hashgraph/core.hpp>
#include <hashgraph/hash.hpp>
#include <hashgraph/join.hpp>
#include <hashgraph/keygen.hpp>
#include <hashgraph/parallel.hpp>
