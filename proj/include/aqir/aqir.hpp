#ifndef AQIR_AQIR_HPP
#define AQIR_AQIR_HPP

// Everything except the benchmark/diagnostics header, which needs MPFR.

#include <aqir/dyadic.hpp>
#include <aqir/errors.hpp>
#include <aqir/isolate.hpp>
#include <aqir/oracle.hpp>
#include <aqir/pipeline.hpp>
#include <aqir/polynomial.hpp>
#include <aqir/problem.hpp>
#include <aqir/steps.hpp>

#endif // AQIR_AQIR_HPP
