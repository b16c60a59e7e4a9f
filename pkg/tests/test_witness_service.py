import pytest
from hypothesis import given

from src.config.settings import TestingConfig
from src.models.family import DoubleDeltaCertificate, ExtractionParams, FiniteSet
from src.models.topology import Box, ProductInstance
from src.models.witness import PartialPoint, PipelineParams, WitnessPlan
from src.services.generator_service import GeneratorService
from src.services.witness_service import WitnessService
from src.utils.errors import CapExceeded, DomainClash, InvalidParams, PlanInvalid
from strategies import instance_params

service = WitnessService(TestingConfig)
pairs = ExtractionParams(2, 2)


def single_kernel_cert(per_block, kernel=(0,)):
    """Certificate with A = A_α = kernel for every listed block"""
    return DoubleDeltaCertificate(
        m=len(kernel),
        block_indices=tuple(per_block),
        per_block_indices=per_block,
        per_block_kernels={alpha: FiniteSet.of(kernel) for alpha in per_block},
        global_kernel=FiniteSet.of(kernel),
    )


@pytest.fixture
def same_support(sierpinski):
    boxes = tuple(Box.of({0: member}) for member in (0, 1, 0, 1, 0, 1))
    return ProductInstance((sierpinski,), boxes, (0, 3, 6))


@pytest.fixture
def empty_supports(discrete2):
    return ProductInstance((discrete2,), (Box(),) * 4, (0, 2, 4))


@pytest.fixture
def disjoint_supports(discrete2):
    boxes = (Box.of({0: 1}), Box.of({1: 0}), Box.of({2: 2}), Box.of({3: 1}))
    return ProductInstance((discrete2,) * 4, boxes, (0, 2, 4))


class TestReduceSupports:
    def test_identical_supports(self, same_support):
        cert = service.reduce_supports(same_support, pairs)
        assert cert.m == 1
        assert cert.global_kernel == FiniteSet.of([0])
        assert cert.per_block_kernels == {0: FiniteSet.of([0]), 1: FiniteSet.of([0])}

    def test_empty_supports(self, empty_supports):
        cert = service.reduce_supports(empty_supports, pairs)
        assert cert.m == 0
        assert cert.global_kernel == FiniteSet()

    def test_one_block(self, sierpinski):
        instance = ProductInstance((sierpinski,), (Box.of({0: 0}),) * 4, (0, 4))
        assert service.reduce_supports(instance, pairs) is None

    def test_no_boxes(self, sierpinski):
        assert service.reduce_supports(ProductInstance((sierpinski,)), pairs) is None


class TestSelections:
    @pytest.fixture
    def clash(self, discrete2):
        boxes = (Box.of({0: 0}), Box.of({0: 0}), Box.of({0: 1}), Box.of({0: 1}))
        return ProductInstance((discrete2,), boxes, (0, 2, 4))

    def test_kernel_groups_by_constraint(self, clash):
        cert = single_kernel_cert({0: (0, 1), 1: (0,)})
        assert service.select_kernel_centered(clash, cert, 2) == (0, 1)
        assert service.select_kernel_centered(clash, cert, 3) is None

    def test_empty_kernel_takes_everything(self, empty_supports):
        cert = service.reduce_supports(empty_supports, pairs)
        assert service.select_kernel_centered(empty_supports, cert, 4) == (0, 1, 2, 3)

    def test_agreeing_boxes(self, same_support):
        cert = service.reduce_supports(same_support, pairs)
        assert service.select_kernel_centered(same_support, cert, 6) == tuple(range(6))

    def test_block_takes_larger_class(self, discrete2):
        boxes = tuple(Box.of({0: member}) for member in (0, 1, 0, 1, 0)) + (Box.of({0: 0}),) * 2
        instance = ProductInstance((discrete2,), boxes, (0, 5, 7))
        cert = single_kernel_cert({0: (0, 1, 2, 3, 4), 1: (0, 1)})
        assert service.select_block_centered(instance, cert, 0, 2) == (0, 2, 4)
        assert service.select_block_centered(instance, cert, 1, 2) == (5, 6)

    def test_block_with_generic_point(self, same_support):
        cert = service.reduce_supports(same_support, pairs)
        assert service.select_block_centered(same_support, cert, 1, 3) == (3, 4, 5)

    def test_block_within_kernel_selection(self, same_support):
        cert = service.reduce_supports(same_support, pairs)
        assert service.select_block_centered(same_support, cert, 0, 2, within=[0, 2, 4]) == (0, 2)

    def test_shift_past_the_end(self, same_support):
        cert = service.reduce_supports(same_support, pairs)
        assert service.select_block_centered(same_support, cert, 1, 2, shift=1) is None

    def test_point_cap(self, discrete2):
        capped = WitnessService(TestingConfig.with_overrides(PRODUCT_POINT_CAP=1))
        boxes = (Box.of({0: 0}),) * 4
        instance = ProductInstance((discrete2,), boxes, (0, 2, 4))
        cert = capped.reduce_supports(instance, pairs)
        with pytest.raises(CapExceeded):
            capped.select_kernel_centered(instance, cert, 2)


class TestAssembly:
    def plan_for(self, instance, shift=0):
        cert = service.reduce_supports(instance, pairs)
        selections = {}
        for alpha in cert.block_indices:
            chosen = service.select_block_centered(instance, cert, alpha, 1, shift=shift)
            if chosen is not None:
                selections[alpha] = chosen
        plan = service.build_plan(instance, cert, selections, shift)
        service.check_plan(instance, plan)
        return plan

    def test_single_box(self, worked_instance):
        plan = self.plan_for(worked_instance)
        assembly = service.assemble_witness(worked_instance, plan, [1])
        point = assembly.point.as_dict()
        assert point[0] in worked_instance.open_of(1, 0)
        assert point[2] in worked_instance.open_of(1, 2)

    def test_disjoint_supports(self, disjoint_supports):
        plan = self.plan_for(disjoint_supports)
        assembly = service.assemble_witness(disjoint_supports, plan, [0, 1, 2, 3])
        assert assembly.q == PartialPoint()
        assert assembly.r == PartialPoint()
        assert assembly.s.as_dict() == {0: 1, 1: 0, 2: 0, 3: 1}
        assert assembly.point == assembly.s

    def test_worked_instance(self, worked_instance):
        plan = self.plan_for(worked_instance)
        assert plan.kernel_selection == tuple(range(6))
        assembly = service.assemble_witness(worked_instance, plan, range(6))
        assert assembly.q.as_dict() == {0: 0}
        assert assembly.point.as_dict() == {0: 0, 1: 0, 2: 1, 3: 0, 4: 0, 5: 1, 6: 0}

    def test_domains_are_disjoint(self, worked_instance):
        plan = self.plan_for(worked_instance)
        assembly = service.assemble_witness(worked_instance, plan, [0, 4, 5])
        q, r, s = (piece.domain.as_frozenset() for piece in (assembly.q, assembly.r, assembly.s))
        assert not (q & r or q & s or r & s)

    def test_empty_subfamily(self, worked_instance):
        plan = self.plan_for(worked_instance)
        with pytest.raises(PlanInvalid):
            service.assemble_witness(worked_instance, plan, [])

    def test_outside_selection(self, same_support):
        plan = self.plan_for(same_support)
        restricted = WitnessPlan(plan.support_cert, (0, 2), {0: (0, 2)}, {0: 0, 2: 0})
        with pytest.raises(PlanInvalid):
            service.assemble_witness(same_support, restricted, [1])

    def test_irreconcilable_kernel(self, discrete2):
        boxes = (Box.of({0: 0}), Box.of({0: 1}), Box.of({0: 0}), Box.of({0: 1}))
        instance = ProductInstance((discrete2,), boxes, (0, 2, 4))
        cert = service.reduce_supports(instance, pairs)
        plan = WitnessPlan(cert, (0, 1, 2, 3), {0: (0, 1), 1: (2, 3)}, {0: 0, 1: 0, 2: 1, 3: 1})
        with pytest.raises(PlanInvalid):
            service.check_plan(instance, plan)
        with pytest.raises(PlanInvalid):
            service.assemble_witness(instance, plan, [0, 1])

    def test_selection_must_be_union(self, same_support):
        plan = self.plan_for(same_support)
        broken = WitnessPlan(plan.support_cert, (0, 1), plan.block_selections, plan.block_of)
        with pytest.raises(PlanInvalid):
            service.check_plan(same_support, broken)

    def test_label_without_source_block(self, same_support):
        cert = service.reduce_supports(same_support, pairs)
        plan = service.build_plan(same_support, cert, {1: (3, 4, 5)}, shift=1)
        with pytest.raises(PlanInvalid, match="has no source block under shift 1"):
            service.check_plan(same_support, plan)

    def test_global_kernel_outside_block_kernel(self, same_support):
        cert = DoubleDeltaCertificate(
            m=0,
            block_indices=(0, 1),
            per_block_indices={0: (0, 1, 2), 1: (0, 1, 2)},
            per_block_kernels={0: FiniteSet(), 1: FiniteSet()},
            global_kernel=FiniteSet.of([0]),
        )
        plan = service.build_plan(same_support, cert, {0: (0, 1, 2), 1: (3, 4, 5)})
        with pytest.raises(PlanInvalid, match="A is not contained in the kernel of block 0"):
            service.check_plan(same_support, plan)

    def test_block_kernel_outside_support(self, empty_supports):
        cert = DoubleDeltaCertificate(
            m=1,
            block_indices=(0, 1),
            per_block_indices={0: (0, 1), 1: (0, 1)},
            per_block_kernels={0: FiniteSet.of([0]), 1: FiniteSet.of([0])},
            global_kernel=FiniteSet(),
        )
        plan = service.build_plan(empty_supports, cert, {0: (0, 1), 1: (2, 3)})
        with pytest.raises(PlanInvalid, match="kernel of block 0 is not inside B_0"):
            service.check_plan(empty_supports, plan)

    def test_later_box_meets_earlier_support(self, sierpinski):
        boxes = (Box.of({0: 0, 1: 0}), Box.of({0: 0}), Box.of({0: 0, 1: 0}), Box.of({0: 0}))
        instance = ProductInstance((sierpinski, sierpinski), boxes, (0, 2, 4))
        cert = single_kernel_cert({0: (0, 1), 1: (0, 1)})
        plan = service.build_plan(instance, cert, {0: (0, 1), 1: (2, 3)})
        with pytest.raises(PlanInvalid, match=r"\(B_2 minus its block kernel\) meets B_0"):
            service.check_plan(instance, plan)


class TestPartialPoint:
    def test_assigning_twice(self):
        with pytest.raises(DomainClash):
            PartialPoint(((0, 1), (0, 2)))

    def test_union_overlap(self):
        with pytest.raises(DomainClash):
            PartialPoint.of({0: 1}).union(PartialPoint.of({1: 0}), PartialPoint.of({0: 0}))

    def test_union(self):
        merged = PartialPoint.of({2: 1}).union(PartialPoint.of({0: 0}))
        assert merged.as_dict() == {0: 0, 2: 1}
        assert merged.domain == FiniteSet.of([0, 2])


class TestPipeline:
    def test_empty_supports(self, empty_supports):
        report = service.run_pipeline(empty_supports, PipelineParams(pairs))
        assert report.ok
        assert report.selected == (0, 1, 2, 3)
        assert len(report.subset_checks) == 4 + 6 + 4 + 1
        assert all(check.ok for check in report.subset_checks)

    def test_worked_instance(self, worked_instance):
        report = service.run_pipeline(worked_instance, PipelineParams(pairs))
        assert report.ok
        assert report.selected == tuple(range(6))
        assert report.block_selections == {0: (0, 1, 2), 1: (3, 4, 5)}

    def test_irreconcilable_constraints(self, discrete2):
        boxes = (Box.of({0: 0}), Box.of({0: 1}), Box.of({0: 0}), Box.of({0: 1}))
        instance = ProductInstance((discrete2,), boxes, (0, 2, 4))
        report = service.run_pipeline(instance, PipelineParams(pairs))
        assert not report.ok
        assert report.failed_stage == "select_kernel_centered"
        assert report.support_cert is not None

    def test_support_failure(self, sierpinski):
        instance = ProductInstance((sierpinski,), (Box.of({0: 0}),) * 4, (0, 4))
        report = service.run_pipeline(instance, PipelineParams(pairs))
        assert report.failed_stage == "reduce_supports"

    def test_block_stage_failure(self, same_support):
        report = service.run_pipeline(same_support, PipelineParams(pairs, block_target=4))
        assert report.failed_stage == "select_block_centered"

    def test_shift(self, sierpinski):
        instance = ProductInstance((sierpinski,), (Box.of({0: 0}),) * 6, (0, 2, 4, 6))
        report = service.run_pipeline(instance, PipelineParams(pairs, shift=1))
        assert report.ok
        assert report.block_selections == {0: (2, 3), 1: (4, 5)}
        assert report.selected == (2, 3, 4, 5)

    def test_subset_size(self, worked_instance):
        report = service.run_pipeline(worked_instance, PipelineParams(pairs, subset_size=1))
        assert [check.indices for check in report.subset_checks] == [(g,) for g in range(6)]

    def test_negative_shift(self):
        with pytest.raises(InvalidParams):
            PipelineParams(pairs, shift=-1)

    def test_worker_count_does_not_change_report(self, worked_instance):
        threaded = WitnessService(TestingConfig.with_overrides(WORKERS=4))
        assert threaded.run_pipeline(worked_instance, PipelineParams(pairs)) == \
            service.run_pipeline(worked_instance, PipelineParams(pairs))


@given(instance_params())
def test_every_assembled_point_lies_in_its_boxes(params):
    instance = GeneratorService(TestingConfig).gen_instance(params)
    report = service.run_pipeline(instance, PipelineParams(pairs, kernel_target=1, block_target=2))
    assert all(check.ok for check in report.subset_checks)
    if report.failed_stage is None:
        assert report.ok
        cert = report.support_cert
        plan = service.build_plan(instance, cert, report.block_selections)
        for check in report.subset_checks:
            assembly = service.assemble_witness(instance, plan, check.indices)
            point = assembly.point.as_dict()
            for gamma in check.indices:
                for coord, member in instance.boxes[gamma].constraints:
                    assert point[coord] in instance.factors[coord].basis[member]
            q, r, s = (piece.domain.as_frozenset() for piece in (assembly.q, assembly.r, assembly.s))
            assert not (q & r or q & s or r & s)
