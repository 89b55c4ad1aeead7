// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FOCKHOM_PROVENANCE_HPP
#define FOCKHOM_PROVENANCE_HPP

#include <string>
#include <string_view>

namespace fockhom {

/// SHA-1 of "blob <size>\0<content>", the id git gives the same bytes.
std::string git_blob_sha1(std::string_view content);

/// Hash of the canonical circuit-constants JSON.
std::string circuit_constants_hash();

}  // namespace fockhom

#endif
