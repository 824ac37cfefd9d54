/*
   Copyright 2026 The WorkerRep Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>

#include "workerrep/common.hpp"

namespace workerrep {

// Keccak-256 as used by Ethereum (original padding 0x01, not SHA3-256's 0x06).
class Keccak256 {
  public:
    Keccak256() = default;

    Keccak256& update(ByteView data);
    Keccak256& update(std::string_view data) { return update(as_bytes(data)); }
    Hash256 finalize();

  private:
    static constexpr std::size_t kRate = 136;

    void absorb_block();

    std::uint64_t state_[25]{};
    std::uint8_t buffer_[kRate]{};
    std::size_t buffered_{0};
};

Hash256 keccak256(ByteView data);
inline Hash256 keccak256(std::string_view data) { return keccak256(as_bytes(data)); }

}  // namespace workerrep
