#pragma once

#include <filesystem>
#include <string>

#include "gskor/gsde.hpp"
#include "gskor/skorokhod.hpp"

namespace gskor::io {

/// Round-trip decimal formatting ("%.17g"); identical bytes for identical
/// doubles on every run.
std::string format_double(double value);

/// Path CSV: header `t,value`, one row per node, full-precision decimals.
/// The time column must describe a uniform grid starting at 0.
SampledPath read_path_csv(const std::filesystem::path& file);
void write_path_csv(const std::filesystem::path& file, const SampledPath& path);

/// Columns t,s,x,k,k_r,k_l.
void write_skorokhod_csv(const std::filesystem::path& file, const SampledPath& s,
                         const SkorokhodSolution& solution);

/// Columns t,B,QV,X,A,A_r,A_l.
void write_sde_path_csv(const std::filesystem::path& file, const GBMPath& driver,
                        const ReflectedSdeSolution& solution);

}  // namespace gskor::io
