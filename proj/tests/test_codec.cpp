#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "eqasm/codec.hpp"
#include "oracles.hpp"

using namespace eqasm;

TEST_CASE("golden encodings match the packing oracle") {
    CHECK(encode(ins::Nop{}) == 0x00000000u);
    CHECK(oracle::pack_nop() == 0x00000000u);

    CHECK(encode(ins::Stop{}) == 0x10000000u);
    CHECK(oracle::pack_stop() == 0x10000000u);

    const ins::Alu add{ins::AluOp::Add, 1, 2, 3};
    CHECK(oracle::pack_add(1, 2, 3) == 0x3C110C00u);
    CHECK(encode(add) == 0x3C110C00u);

    const ins::Ldi ldi{0, -1};
    CHECK(oracle::pack_ldi(0, -1) == 0x2C0FFFFFu);
    CHECK(encode(ldi) == 0x2C0FFFFFu);

    const ins::Br br{CompFlag::Always, 2};
    CHECK(oracle::pack_br(2, 0) == 0x02000020u);
    CHECK(encode(br) == 0x02000020u);

    const ins::BundleWord bundle{1, {0x009, 0}, {0x00A, 1}};
    CHECK(oracle::pack_bundle_word(1, 0x009, 0, 0x00A, 1) == 0x82400A09u);
    CHECK(encode(bundle) == 0x82400A09u);
}

TEST_CASE("further encodings agree with the packing oracle") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const auto r = [&](unsigned bound) {
            return static_cast<unsigned>(rng() % bound);
        };
        const unsigned rd = r(32), rs = r(32), rt = r(32);
        CHECK(encode(ins::Alu{ins::AluOp::Add, std::uint8_t(rd),
                              std::uint8_t(rs), std::uint8_t(rt)}) ==
              oracle::pack_rrr(0b0011110, rd, rs, rt));
        CHECK(encode(ins::Alu{ins::AluOp::Sub, std::uint8_t(rd),
                              std::uint8_t(rs), std::uint8_t(rt)}) ==
              oracle::pack_rrr(0b0011111, rd, rs, rt));
        CHECK(encode(ins::Alu{ins::AluOp::And, std::uint8_t(rd),
                              std::uint8_t(rs), std::uint8_t(rt)}) ==
              oracle::pack_rrr(0b0011010, rd, rs, rt));
        CHECK(encode(ins::Alu{ins::AluOp::Or, std::uint8_t(rd),
                              std::uint8_t(rs), std::uint8_t(rt)}) ==
              oracle::pack_rrr(0b0011000, rd, rs, rt));
        CHECK(encode(ins::Alu{ins::AluOp::Xor, std::uint8_t(rd),
                              std::uint8_t(rs), std::uint8_t(rt)}) ==
              oracle::pack_rrr(0b0011001, rd, rs, rt));
        CHECK(encode(ins::Not{std::uint8_t(rd), std::uint8_t(rt)}) ==
              oracle::pack_not(rd, rt));
        CHECK(encode(ins::Cmp{std::uint8_t(rs), std::uint8_t(rt)}) ==
              oracle::pack_cmp(rs, rt));

        const int off = static_cast<int>(r(32768)) - 16384;
        const unsigned flag = r(12);
        CHECK(encode(ins::Br{static_cast<CompFlag>(flag), off}) ==
              oracle::pack_br(off, flag));
        CHECK(encode(ins::Fbr{static_cast<CompFlag>(flag),
                              std::uint8_t(rd)}) == oracle::pack_fbr(flag, rd));

        const unsigned qi = r(7);
        CHECK(encode(ins::Fmr{std::uint8_t(rd), std::uint8_t(qi)}) ==
              oracle::pack_fmr(rd, qi));

        const int imm10 = static_cast<int>(r(1024)) - 512;
        CHECK(encode(ins::Ld{std::uint8_t(rd), std::uint8_t(rt), imm10}) ==
              oracle::pack_ld(rd, rt, imm10));
        CHECK(encode(ins::St{std::uint8_t(rs), std::uint8_t(rt), imm10}) ==
              oracle::pack_st(rs, rt, imm10));

        const int imm20 = static_cast<int>(r(1u << 20)) - (1 << 19);
        CHECK(encode(ins::Ldi{std::uint8_t(rd), imm20}) ==
              oracle::pack_ldi(rd, imm20));

        const unsigned imm15 = r(1u << 15);
        CHECK(encode(ins::Ldui{std::uint8_t(rd), std::uint8_t(rs), imm15}) ==
              oracle::pack_ldui(rd, rs, imm15));

        const unsigned imm20u = r(1u << 20);
        CHECK(encode(ins::Qwait{imm20u}) == oracle::pack_qwait(imm20u));
        CHECK(encode(ins::Qwaitr{std::uint8_t(rs)}) == oracle::pack_qwaitr(rs));

        const unsigned mask7 = r(128);
        CHECK(encode(ins::Smis{std::uint8_t(rd), std::uint8_t(mask7)}) ==
              oracle::pack_smis(rd, mask7));
        const unsigned mask16 = r(65536);
        CHECK(encode(ins::Smit{std::uint8_t(rd), std::uint16_t(mask16)}) ==
              oracle::pack_smit(rd, mask16));
    }
}

TEST_CASE("decode inverts encode") {
    CHECK(decode(0x00000000u) == Instruction{ins::Nop{}});
    CHECK(decode(0x80000000u) ==
          Instruction{ins::BundleWord{0, {0, 0}, {0, 0}}});
    CHECK(decode(0x3C110C00u) ==
          Instruction{ins::Alu{ins::AluOp::Add, 1, 2, 3}});
}

TEST_CASE("round trip over randomized instructions") {
    std::mt19937_64 rng(20250101);
    int bundles = 0;
    std::set<std::size_t> variants_seen;
    for (int i = 0; i < 20000; ++i) {
        const Instruction instr = oracle::random_instruction(rng);
        variants_seen.insert(instr.index());
        if (std::holds_alternative<ins::BundleWord>(instr))
            ++bundles;
        const std::uint32_t word = encode(instr);
        CHECK(decode(word, DecodeMode::Strict) == instr);
    }
    CHECK(variants_seen.size() == std::variant_size_v<Instruction>);
    CHECK(bundles > 0);
}

TEST_CASE("format bit separates bundles from single-format words") {
    CHECK((encode(ins::BundleWord{3, {9, 1}, {10, 2}}) >> 31) == 1);
    CHECK((encode(ins::Qwait{12345}) >> 31) == 0);
    CHECK((encode(ins::Smit{31, 0xFFFF}) >> 31) == 0);
}

TEST_CASE("the twenty major opcodes are pairwise distinct") {
    std::set<std::uint32_t> seen;
    for (int i = 0; i < kNumMnemonics; ++i) {
        const auto op = major_opcode(static_cast<Mnemonic>(i));
        CHECK(op < 128);
        CHECK(seen.insert(op).second);
    }
    CHECK(seen.size() == 20);
}

TEST_CASE("smis mask computation") {
    const std::vector<int> all = {0, 1, 2, 3, 4, 5, 6};
    CHECK(compute_smis_mask(all) == 0b1111111);
    CHECK(compute_smis_mask(std::vector<int>{0}) == 0b0000001);
    CHECK(compute_smis_mask(std::vector<int>{2, 4}) == 0b0010100);
    CHECK_THROWS_AS(compute_smis_mask(std::vector<int>{}), ValueError);
    CHECK_THROWS_AS(compute_smis_mask(std::vector<int>{7}), ValueError);

    // mask(A union B) == mask(A) | mask(B)
    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        std::vector<int> a, b, both;
        for (int q = 0; q < 7; ++q) {
            const bool in_a = rng() & 1, in_b = rng() & 1;
            if (in_a)
                a.push_back(q);
            if (in_b)
                b.push_back(q);
            if (in_a || in_b)
                both.push_back(q);
        }
        if (a.empty() || b.empty())
            continue;
        CHECK(compute_smis_mask(both) ==
              (compute_smis_mask(a) | compute_smis_mask(b)));
    }
}

TEST_CASE("smit mask computation uses the topology bit assignment") {
    const auto topo = Topology::default_topology();
    CHECK(topo.pair_index(0, 2) == 0);
    CHECK(topo.pair_index(2, 0) == 1);

    const std::vector<QubitPair> one = {{2, 0}};
    CHECK(compute_smit_mask(one, topo) == (1u << 1));

    const std::vector<QubitPair> two = {{2, 0}, {0, 2}};
    CHECK(compute_smit_mask(two, topo) == 0b11);

    std::vector<QubitPair> all(topo.pairs().begin(), topo.pairs().end());
    CHECK(compute_smit_mask(all, topo) == 0xFFFF);

    const std::vector<QubitPair> bad = {{0, 1}};
    CHECK_THROWS_WITH(compute_smit_mask(bad, topo),
                      Catch::Matchers::ContainsSubstring("(0,1)"));
}

TEST_CASE("bundle packing") {
    const ins::BundleOp a{9, 0}, b{10, 1}, c{11, 2};

    const auto one = pack_bundle(2, std::vector{a});
    REQUIRE(one.size() == 1);
    CHECK(one[0] == ins::BundleWord{2, a, {0, 0}});

    const auto two = pack_bundle(0, std::vector{a, b});
    REQUIRE(two.size() == 1);
    CHECK(two[0] == ins::BundleWord{0, a, b});

    const auto three = pack_bundle(5, std::vector{a, b, c});
    REQUIRE(three.size() == 2);
    CHECK(three[0] == ins::BundleWord{5, a, b});
    CHECK(three[1] == ins::BundleWord{0, c, {0, 0}});

    CHECK_THROWS_AS(pack_bundle(0, std::vector<ins::BundleOp>{}), EncodeError);
    CHECK_THROWS_AS(pack_bundle(8, std::vector{a}), EncodeError);

    // word count and order over random op lists
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        std::vector<ins::BundleOp> ops;
        const std::size_t n = 1 + rng() % 9;
        for (std::size_t k = 0; k < n; ++k)
            ops.push_back({static_cast<std::uint16_t>(1 + rng() % 511),
                           static_cast<std::uint8_t>(rng() % 32)});
        const auto words = pack_bundle(static_cast<int>(rng() % 8), ops);
        CHECK(words.size() == (n + 1) / 2);
        std::vector<ins::BundleOp> unpacked;
        for (const auto &w : words) {
            unpacked.push_back(w.op0);
            unpacked.push_back(w.op1);
        }
        while (!unpacked.empty() && unpacked.back().opcode == 0)
            unpacked.pop_back();
        CHECK(unpacked == ops);
    }
}

TEST_CASE("branch offset encoding") {
    CHECK(encode_branch_offset(8) == 2);
    CHECK(encode_branch_offset(0) == 0);
    CHECK(encode_branch_offset(-4) == -1);
    CHECK(encode_branch_offset(4 * 16383) == 16383);
    CHECK(encode_branch_offset(-4 * 16384) == -16384);
    CHECK_THROWS_AS(encode_branch_offset(6), EncodeError);
    CHECK_THROWS_AS(encode_branch_offset(4 * 16384), EncodeError);
    CHECK_THROWS_AS(encode_branch_offset(-4 * 16385), EncodeError);

    // The sign-extended top bits land in the word.
    CHECK(((encode(ins::Br{CompFlag::Always, -1}) >> 4) & 0x1FFFFF) ==
          0x1FFFFF);
}

TEST_CASE("strict decoding rejects junk") {
    // nonzero reserved bits in CMP
    const std::uint32_t cmp = oracle::pack_cmp(1, 2) | 1u;
    CHECK_NOTHROW(decode(cmp, DecodeMode::Permissive));
    CHECK_THROWS_AS(decode(cmp, DecodeMode::Strict), DecodeError);

    // unknown major opcode
    CHECK_THROWS_AS(decode(0b0111111u << 25, DecodeMode::Permissive),
                    DecodeError);

    // FMR with qubit 7
    CHECK_THROWS_AS(decode(oracle::pack_fmr(0, 7), DecodeMode::Permissive),
                    DecodeError);

    // comparison flag codes 12..15
    CHECK_THROWS_AS(decode(oracle::pack_br(0, 13), DecodeMode::Permissive),
                    DecodeError);

    // s/t register fields 32..63
    CHECK_THROWS_AS(decode(oracle::pack_smis(33, 1), DecodeMode::Permissive),
                    DecodeError);
    CHECK_THROWS_AS(decode(oracle::pack_smit(40, 1), DecodeMode::Permissive),
                    DecodeError);

    // imm21 whose dead bits are not the sign extension
    const std::uint32_t br = oracle::pack_br(2, 0) | (1u << 24);
    CHECK_NOTHROW(decode(br, DecodeMode::Permissive));
    CHECK_THROWS_AS(decode(br, DecodeMode::Strict), DecodeError);
}

TEST_CASE("image byte order") {
    const std::vector<std::uint32_t> words = {0x11223344u, 0xAABBCCDDu};
    const auto le = image_to_bytes(words);
    CHECK(le == std::vector<std::uint8_t>{0x44, 0x33, 0x22, 0x11, 0xDD, 0xCC,
                                          0xBB, 0xAA});
    CHECK(image_from_bytes(le) == words);

    const auto be = image_to_bytes(words, true);
    CHECK(be == std::vector<std::uint8_t>{0x11, 0x22, 0x33, 0x44, 0xAA, 0xBB,
                                          0xCC, 0xDD});
    CHECK(image_from_bytes(be, true) == words);

    const std::vector<std::uint8_t> truncated = {1, 2, 3, 4, 5};
    CHECK_THROWS_AS(image_from_bytes(truncated), DecodeError);
}
