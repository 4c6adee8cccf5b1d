# ferry_planner/core/pdf_report_generator.py

from __future__ import annotations

from datetime import datetime
from io import BytesIO
from typing import List, Optional

from reportlab.lib.pagesizes import landscape, letter
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Table

from ferry_planner.utils.pdf_styles import (
    PDFBranding, PDFColors, PDFLayoutHelpers, PDFStyles, PDFTableStyles,
)


def _footer_canvas(canvas, doc):
    """Draw footer on every page"""
    canvas.saveState()
    footer_y = doc.bottomMargin - 0.3 * inch
    canvas.setStrokeColor(PDFColors.TEAL)
    canvas.setLineWidth(0.5)
    canvas.line(doc.leftMargin, footer_y + 0.2 * inch, doc.width + doc.leftMargin, footer_y + 0.2 * inch)
    canvas.setFont('Helvetica', 8)
    canvas.setFillColor(PDFColors.MUTED)
    canvas.drawCentredString(
        (doc.width + doc.leftMargin + doc.rightMargin) / 2,
        footer_y,
        f"{PDFBranding.PRODUCT_NAME} | page {doc.page}"
    )
    canvas.restoreState()


class PDFReportGenerator:
    """
    PDF rendition of the experiment summary table
    """

    def __init__(self):
        self.styles = {
            'title': PDFStyles.get_title_style(),
            'subtitle': PDFStyles.get_subtitle_style(),
            'section': PDFStyles.get_section_header_style(),
            'body': PDFStyles.get_body_style(),
        }

    def _create_data_table(self, data, col_widths=None):
        table = Table(data, colWidths=col_widths, repeatRows=1)
        table.setStyle(PDFTableStyles.get_standard_table_style())
        return table

    def _create_summary_box(self, summary_data):
        data = [[label, value] for label, value in summary_data.items()]
        table = Table(data, colWidths=[2.5 * inch, 4 * inch])
        table.setStyle(PDFTableStyles.get_summary_table_style())
        return table

    def generate_experiment_summary(self, header: List[str], rows: List[List[str]], run_info: dict,
                                    generated_at: Optional[datetime] = None, notes: Optional[List[str]] = None) -> bytes:
        """
        Summary PDF: one row per experiment plus the run details.
        Returns the document bytes.
        """
        buffer = BytesIO()
        doc = SimpleDocTemplate(
            buffer, pagesize=landscape(letter),
            topMargin=0.5 * inch,
            bottomMargin=0.8 * inch,
            leftMargin=0.5 * inch,
            rightMargin=0.5 * inch,
            title=PDFBranding.REPORT_TITLE,
        )
        elements = []
        stamp = (generated_at or datetime.now()).strftime('%B %d, %Y at %I:%M %p')
        elements.append(Paragraph(PDFBranding.REPORT_TITLE, self.styles['title']))
        elements.append(Paragraph(f"Scenario {run_info.get('scenario', '')}, generated on {stamp}",
                                  self.styles['subtitle']))
        elements.append(PDFLayoutHelpers.create_accent_line())

        elements.append(Paragraph("Design and costs per experiment", self.styles['section']))
        data = [list(header)] + [[str(cell) for cell in row] for row in rows]
        elements.append(self._create_data_table(data))
        for note in notes or ():
            elements.append(Paragraph(note, self.styles['body']))
        elements.append(PDFLayoutHelpers.create_spacer(0.3))

        elements.append(Paragraph("Run", self.styles['section']))
        elements.append(self._create_summary_box({k: str(v) for k, v in run_info.items()}))

        doc.build(elements, onFirstPage=_footer_canvas, onLaterPages=_footer_canvas)
        return buffer.getvalue()
