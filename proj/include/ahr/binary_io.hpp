#pragma once

#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ahr/common.hpp"

namespace ahr {

// Little-endian regardless of host order.
class BinWriter {
public:
    explicit BinWriter(std::ostream& out) : out_(out) {}

    void u8(uint8_t v) { out_.put(char(v)); }
    void u16(uint16_t v) { le(v, 2); }
    void u32(uint32_t v) { le(v, 4); }
    void u64(uint64_t v) { le(v, 8); }
    void i32(int32_t v) { le(uint32_t(v), 4); }
    void f64(double v) {
        uint64_t b;
        std::memcpy(&b, &v, 8);
        le(b, 8);
    }
    void magic(const char* m) { out_.write(m, 4); }
    void weight(const PathWeight& w) {
        f64(w.length);
        for (uint64_t c : w.nuance) u64(c);
        u8(w.k);
    }
    bool ok() const { return bool(out_); }

private:
    void le(uint64_t v, int bytes) {
        char buf[8];
        for (int i = 0; i < bytes; ++i) buf[i] = char((v >> (8 * i)) & 0xff);
        out_.write(buf, bytes);
    }
    std::ostream& out_;
};

class BinReader {
public:
    explicit BinReader(std::istream& in) : in_(in) {}

    uint8_t u8() { return uint8_t(le(1)); }
    uint16_t u16() { return uint16_t(le(2)); }
    uint32_t u32() { return uint32_t(le(4)); }
    uint64_t u64() { return le(8); }
    int32_t i32() { return int32_t(uint32_t(le(4))); }
    double f64() {
        uint64_t b = le(8);
        double v;
        std::memcpy(&v, &b, 8);
        return v;
    }
    void expect_magic(const char* m) {
        char buf[4];
        in_.read(buf, 4);
        if (!in_ || std::memcmp(buf, m, 4) != 0)
            throw ParseError(std::string("bad snapshot magic, expected ") + std::string(m, 4));
    }
    PathWeight weight() {
        PathWeight w;
        w.length = f64();
        for (auto& c : w.nuance) c = u64();
        w.k = u8();
        return w;
    }
    // guards vector sizes read from untrusted files
    uint64_t count(uint64_t limit) {
        uint64_t c = u64();
        if (c > limit) throw ParseError("snapshot count out of range");
        return c;
    }

private:
    uint64_t le(int bytes) {
        unsigned char buf[8];
        in_.read(reinterpret_cast<char*>(buf), bytes);
        if (!in_) throw ParseError("truncated snapshot");
        uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) v |= uint64_t(buf[i]) << (8 * i);
        return v;
    }
    std::istream& in_;
};

}  // namespace ahr
